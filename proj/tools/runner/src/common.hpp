// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

// Helpers shared by the experiment definitions. Internal to the runner.

#pragma once

#include "samsde/harness.hpp"
#include "samsde/metrics.hpp"
#include "samsde/optim.hpp"
#include "samsde/runner/experiments.hpp"
#include "samsde/sde.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace samsde::runner::detail {

inline DefaultFn sqrt_of(const char* key) {
  return [key](const Json& r, bool) { return std::sqrt(r.at(key).get<double>()); };
}

inline ParamSpec stride_param(std::int64_t desk, std::int64_t full) {
  return {"stride", ParamType::integer, scaled(desk, full),
          "write every stride-th iteration to results.csv"};
}

inline void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError("params." + key, message);
}

inline double positive(const Json& p, const std::string& key) {
  const double v = get_number(p, key);
  require(v > 0.0 && std::isfinite(v), key, "must be > 0");
  return v;
}

inline double non_negative(const Json& p, const std::string& key) {
  const double v = get_number(p, key);
  require(v >= 0.0 && std::isfinite(v), key, "must be >= 0");
  return v;
}

inline Index count_param(const Json& p, const std::string& key, Index min = 1) {
  const auto v = get_integer(p, key);
  require(v >= min, key, "must be >= " + std::to_string(min));
  return static_cast<Index>(v);
}

inline std::string label(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline Vector to_vector(const std::vector<double>& v) {
  Vector x(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Index>(i)] = v[i];
  return x;
}

inline OptimizerSpec make_spec(Variant v, double eta, double rho) {
  OptimizerSpec s;
  s.variant = v;
  s.eta = eta;
  s.rho = rho;
  return s;
}

inline SdeConfig make_cfg(double eta, double rho, Index mc = 64) {
  SdeConfig c;
  c.eta = eta;
  c.rho = rho;
  c.mc_samples = mc;
  return c;
}

inline double distance_from_origin(const Vector& x, const LossModel&) { return x.norm(); }

inline PlotSeries plot_of(const ResultSeries& r, std::string name) {
  PlotSeries p{std::move(name), {}, r.mean};
  p.x.assign(r.iteration.begin(), r.iteration.end());
  return p;
}

/// Mean and SE of the tail of a series: averaged over iterations >= from.
inline std::pair<double, double> tail_mean(const SeriesStats& s, Index from) {
  double m = 0.0;
  double se = 0.0;
  Index n = 0;
  for (std::size_t k = static_cast<std::size_t>(from); k < s.mean.size(); ++k) {
    m += s.mean[k];
    se += s.se[k];
    ++n;
  }
  if (n == 0) return {std::nan(""), std::nan("")};
  // The per-iteration SEs are correlated along a path, so their average is
  // reported rather than a (too small) independent-sample combination.
  return {m / static_cast<double>(n), se / static_cast<double>(n)};
}

/// Parses an optimizer list entry. "gd" is the full-gradient step.
inline Variant parse_optimizer(const std::string& name, const std::string& key) {
  if (name == "gd") return Variant::sgd;
  try {
    return parse_variant(name);
  } catch (const PreconditionError&) {
    throw ConfigError("params." + key, "unknown optimizer '" + name + "'");
  }
}

/// One optimizer of a saddle experiment: full batch runs use exact gradients.
struct OptimizerRun {
  std::string name;
  Variant variant;
  bool full_batch;
};

inline std::vector<OptimizerRun> optimizer_runs(const Json& p) {
  std::vector<OptimizerRun> out;
  for (const auto& n : get_strings(p, "full_batch")) {
    const Variant v = parse_optimizer(n, "full_batch");
    require(!is_perturbed(v) || v == Variant::pgd, "full_batch",
            "'" + n + "' injects noise; list it under stochastic");
    out.push_back({n, v, true});
  }
  for (const auto& n : get_strings(p, "stochastic")) {
    require(n != "gd", "stochastic", "'gd' is full batch; use sgd or pgd");
    out.push_back({n, parse_optimizer(n, "stochastic"), false});
  }
  require(!out.empty(), "stochastic", "no optimizers selected");
  return out;
}

inline void record_divergence(Output& out, const std::string& name, const EnsembleStats& st) {
  out.metric(name + "/diverged", static_cast<double>(st.diverged()));
}

/// Escape summary rows for one (optimizer, setting) ensemble.
inline void record_escape(Output& out, const std::string& name, const EscapeMetric& m) {
  out.metric(name + "/escaped", static_cast<double>(m.count(EscapeOutcome::escaped)));
  out.metric(name + "/stuck", static_cast<double>(m.count(EscapeOutcome::stuck)));
  out.metric(name + "/returned", static_cast<double>(m.count(EscapeOutcome::returned)));
  double first = 0.0;
  Index n = 0;
  for (const auto& r : m.records()) {
    if (r.first_escape >= 0) {
      first += static_cast<double>(r.first_escape);
      ++n;
    }
  }
  out.metric(name + "/first_escape_mean", n ? first / static_cast<double>(n) : std::nan(""));
}

}  // namespace samsde::runner::detail
