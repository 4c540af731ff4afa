// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/core_math.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace samsde {

/// Tabular data: one example per row of `features`.
struct Dataset {
  Matrix features;  // n x p
  Vector labels;    // class index (as a double) or real target
  bool classification = true;
  Index num_classes = 0;  // 0 for regression targets

  Index size() const noexcept { return features.rows(); }
  Index feature_dim() const noexcept { return features.cols(); }
  /// Throws PreconditionError on shape mismatch, n == 0, or non-finite values.
  void validate() const;
};

/// Thrown for malformed CSV input; carries the 1-based line number.
class DatasetParseError : public Error {
 public:
  DatasetParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Header row, numeric feature columns, last column is the label. Labels that
/// are all non-negative integers make a classification set; anything else is
/// a regression target. Features are standardized per column when requested.
Dataset parse_dataset_csv(std::istream& in, bool standardize = true);
Dataset load_dataset_csv(const std::filesystem::path& path, bool standardize = true);

/// Columns shifted to zero mean and scaled to unit (population) variance.
/// Constant columns are only centred.
void standardize_features(Dataset& data);

struct SynthOptions {
  Index classes = 2;
  double separation = 10.0;  // distance between blob centres, in noise std units
  Index teacher_depth = 20;  // hidden layers of the linear teacher
  Index teacher_width = 10;
};

/// Seed-deterministic synthetic data.
///   "blobs":   `classes` isotropic unit-variance Gaussian blobs in R^p whose
///              centres sit `separation` apart; features standardized.
///   "teacher": standard normal inputs in R^p, real targets from a random
///              deep linear teacher network (see make_teacher_network).
Dataset synth_dataset(std::string_view kind, Index n, Index p, std::uint64_t seed,
                      const SynthOptions& options = {});

}  // namespace samsde
