// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/harness.hpp"
#include "samsde/runner/config.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace samsde::runner {

/// One results.csv series: rows (iteration, mean, se, count).
struct ResultSeries {
  std::string name;
  std::vector<std::int64_t> iteration;
  std::vector<double> mean;
  std::vector<double> se;
  std::vector<std::int64_t> count;

  void push(std::int64_t k, double m, double s, std::int64_t n);
};

/// Copies every `stride`-th iteration of an ensemble series, always keeping
/// the last one.
ResultSeries from_stats(std::string name, const SeriesStats& s, std::int64_t stride);

struct SummaryRow {
  std::string metric;
  double value;
  double se;  // NaN when not applicable
};

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string file;  // written as plot-<file>.svg
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<PlotSeries> series;
};

/// A further CSV table, e.g. terminal points.
struct Table {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Output {
  std::vector<ResultSeries> series;
  std::vector<SummaryRow> summary;
  std::vector<Plot> plots;
  std::vector<Table> tables;

  void metric(std::string name, double value, double se);
  void metric(std::string name, double value);
};

/// 17 significant digits, '.' decimal point, locale independent.
std::string format_number(double v);
/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

std::string results_csv(const Output& out);
std::string summary_csv(const Output& out);
std::string table_csv(const Table& t);
/// SVG 1.1 line chart with a legend. Non-finite points (and non-positive
/// ones on a log axis) break the line.
std::string render_svg(const Plot& p);

/// Writes results.csv, summary.csv, the plots, the tables and config.resolved
/// into `dir`, creating it if needed.
void write_outputs(const std::filesystem::path& dir, const Output& out, const Json& resolved);

}  // namespace samsde::runner
