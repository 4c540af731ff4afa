// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/dataset.hpp"

#include "samsde/mlp.hpp"
#include "samsde/rng.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <vector>

namespace samsde {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

void classify_labels(Dataset& data) {
  bool integral = true;
  double max_label = 0.0;
  for (Index i = 0; i < data.labels.size(); ++i) {
    const double y = data.labels[i];
    if (y < 0.0 || y != std::floor(y)) {
      integral = false;
      break;
    }
    max_label = std::max(max_label, y);
  }
  data.classification = integral;
  data.num_classes = integral ? static_cast<Index>(max_label) + 1 : 0;
}

}  // namespace

DatasetParseError::DatasetParseError(std::size_t line, const std::string& what)
    : Error("dataset line " + std::to_string(line) + ": " + what), line_(line) {}

void Dataset::validate() const {
  if (size() < 1) throw PreconditionError("dataset: needs at least one example");
  if (labels.size() != size()) throw PreconditionError("dataset: label count != row count");
  if (!features.allFinite() || !labels.allFinite()) {
    throw PreconditionError("dataset: non-finite values");
  }
  if (classification && num_classes < 1) {
    throw PreconditionError("dataset: classification set without classes");
  }
}

Dataset parse_dataset_csv(std::istream& in, bool standardize) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      columns = split_fields(line).size();
      break;
    }
  }
  if (columns < 2) {
    throw DatasetParseError(lineno, "header must name at least one feature and the label");
  }

  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns) {
      throw DatasetParseError(lineno, "expected " + std::to_string(columns) + " fields, got " +
                                          std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < columns; ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw DatasetParseError(lineno, "non-numeric value '" + std::string(fields[c]) +
                                            "' in column " + std::to_string(c + 1));
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw DatasetParseError(lineno, "no data rows");

  const auto p = static_cast<Index>(columns - 1);
  Dataset data;
  data.features.resize(rows, p);
  data.labels.resize(rows);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < p; ++j) data.features(i, j) = values[i * (p + 1) + j];
    data.labels[i] = values[i * (p + 1) + p];
  }
  classify_labels(data);
  if (standardize) standardize_features(data);
  data.validate();
  return data;
}

Dataset load_dataset_csv(const std::filesystem::path& path, bool standardize) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path.string());
  return parse_dataset_csv(in, standardize);
}

void standardize_features(Dataset& data) {
  const auto n = static_cast<double>(data.size());
  for (Index j = 0; j < data.feature_dim(); ++j) {
    auto col = data.features.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    if (sd > 0.0) col /= sd;
  }
}

Dataset synth_dataset(std::string_view kind, Index n, Index p, std::uint64_t seed,
                      const SynthOptions& options) {
  if (n < 1 || p < 1) throw PreconditionError("synth_dataset: n and p must be positive");
  RngStream rng(seed, 0x6461746173657473ull);
  Dataset data;
  data.features.resize(n, p);
  data.labels.resize(n);

  if (kind == "blobs") {
    const Index k = options.classes;
    if (k < 2) throw PreconditionError("synth_dataset: blobs need at least two classes");
    // Centres on a regular simplex-like layout: class c sits at (sep / sqrt 2) e_c
    // in a random orthonormal frame, so every pair is `separation` apart. With
    // fewer dimensions than classes, centres go on a line instead.
    Matrix centres = Matrix::Zero(k, p);
    if (p >= k) {
      Matrix g(p, k);
      for (Index j = 0; j < k; ++j) g.col(j) = rng.normal_vector(p);
      const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(p, k);
      centres = (options.separation / std::sqrt(2.0)) * q.transpose();
    } else {
      Vector u = rng.normal_vector(p);
      u.normalize();
      for (Index c = 0; c < k; ++c) centres.row(c) = (options.separation * c) * u.transpose();
    }
    for (Index i = 0; i < n; ++i) {
      const Index c = i % k;
      data.labels[i] = static_cast<double>(c);
      for (Index j = 0; j < p; ++j) data.features(i, j) = centres(c, j) + rng.normal();
    }
    data.classification = true;
    data.num_classes = k;
    standardize_features(data);
  } else if (kind == "teacher") {
    return synth_teacher(n, p, seed, options).data;
  } else {
    throw PreconditionError("synth_dataset: unknown kind '" + std::string(kind) + "'");
  }
  data.validate();
  return data;
}

}  // namespace samsde
