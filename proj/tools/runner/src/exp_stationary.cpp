// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

// stationary-ball: an SDE ensemble on a 2-d quadratic (saddle by default),
// tracking how many trajectories sit inside a small ball around the origin
// and how often they cross its boundary.

#include "common.hpp"
#include "samsde/models.hpp"

namespace samsde::runner {
namespace {

using namespace detail;

Output run(const RunContext& ctx) {
  const Json& p = ctx.params;
  const Vector eig = to_vector(get_numbers(p, "hessian"));
  require(eig.size() >= 1, "hessian", "must not be empty");
  const Vector x0 = to_vector(get_numbers(p, "x0"));
  require(x0.size() == eig.size(), "x0", "length must match hessian");
  const double eta = positive(p, "eta");
  const double rho = non_negative(p, "rho");
  const double sigma = non_negative(p, "sigma");
  SdeVariant variant;
  try {
    variant = parse_sde_variant(get_string(p, "sde"));
  } catch (const PreconditionError& e) {
    throw ConfigError("params.sde", e.what());
  }
  const double radius = positive(p, "radius");
  const Index runs = count_param(p, "runs");
  const Index steps = count_param(p, "steps");
  const Index window = count_param(p, "window");
  const Index settle = count_param(p, "settle", 0);
  const Index trend = count_param(p, "trend_window");
  const auto stride = count_param(p, "stride");

  const auto model = quadratic_model(SymMatrix::diagonal(eig));
  const SdeSystem sys(variant, model, GradOracle::additive_gaussian(sigma),
                      make_cfg(eta, rho, count_param(p, "mc_samples")));
  EnsembleSpec ens;
  ens.runs = runs;
  ens.steps = steps;
  ens.x0 = x0;
  ens.base_seed = ctx.derive("ensemble");
  ens.threads = ctx.threads;
  ens.keep_terminal = get_bool(p, "terminal");
  BallOccupancyMetric metric(runs, steps, radius, Vector::Zero(eig.size()));
  const EnsembleStats st = run_sde_ensemble(sys, ens, {}, {&metric});
  const BallOccupancy& occ = metric.result();

  Output out;
  ResultSeries inside{"inside", {}, {}, {}, {}};
  ResultSeries outside{"outside", {}, {}, {}, {}};
  ResultSeries jumps{"jumps", {}, {}, {}, {}};
  const double nan = std::nan("");
  for (Index k = 0; k <= steps; ++k) {
    if (k % stride != 0 && k != steps) continue;
    const auto in = static_cast<double>(occ.inside[k]);
    inside.push(k, in, nan, runs);
    outside.push(k, static_cast<double>(runs) - in, nan, runs);
    jumps.push(k, static_cast<double>(occ.jumps(k)), nan, runs);
  }
  ResultSeries windows{"jumps_per_window", {}, {}, {}, {}};
  Index quiet = 0;
  double min_jumps = nan;
  for (Index b = 0; b < steps; b += window) {
    const auto j = static_cast<double>(occ.jumps_between(b + 1, b + window + 1));
    windows.push(b, j, nan, runs);
    if (b >= settle) {
      if (j == 0.0) ++quiet;
      min_jumps = std::isnan(min_jumps) ? j : std::min(min_jumps, j);
    }
  }

  const Index entered = occ.ever_entered();
  out.metric("runs", static_cast<double>(runs));
  out.metric("entered", static_cast<double>(entered));
  out.metric("entered_fraction", static_cast<double>(entered) / static_cast<double>(runs));
  double first_sum = 0.0;
  Index first_min = -1;
  Index first_max = -1;
  for (Index f : occ.first_entry) {
    if (f < 0) continue;
    first_sum += static_cast<double>(f);
    first_min = first_min < 0 ? f : std::min(first_min, f);
    first_max = std::max(first_max, f);
  }
  out.metric("first_entry_mean", entered ? first_sum / static_cast<double>(entered) : nan);
  out.metric("first_entry_min", static_cast<double>(first_min));
  out.metric("first_entry_max", static_cast<double>(first_max));
  out.metric("jumps_after_settle", static_cast<double>(occ.jumps_between(settle + 1, steps + 1)));
  out.metric("min_window_jumps_after_settle", min_jumps);
  out.metric("quiet_windows_after_settle", static_cast<double>(quiet));

  std::vector<double> trend_means;
  for (Index b = settle; b + trend <= steps; b += trend) trend_means.push_back(occ.mean_outside(b, b + trend));
  Index up = 0;
  for (std::size_t i = 0; i < trend_means.size(); ++i) {
    out.metric(label("mean_outside/window=%g", static_cast<double>(settle + static_cast<Index>(i) * trend)),
               trend_means[i]);
    if (i > 0 && trend_means[i] >= trend_means[i - 1]) ++up;
  }
  out.metric("nondecreasing_window_pairs", static_cast<double>(up));
  out.metric("window_pairs", trend_means.empty() ? 0.0 : static_cast<double>(trend_means.size() - 1));
  out.metric("diverged", static_cast<double>(st.diverged()));

  out.plots.push_back({"occupancy", label("trajectories inside / outside the ball r = %g", radius),
                       "iteration", "trajectories", false, false,
                       {plot_of(inside, "inside"), plot_of(outside, "outside")}});
  out.plots.push_back({"jumps", "ball crossings per window", "iteration", "entries + exits", false,
                       false, {plot_of(windows, label("per %g iterations", static_cast<double>(window)))}});
  out.series.push_back(std::move(inside));
  out.series.push_back(std::move(outside));
  out.series.push_back(std::move(jumps));
  out.series.push_back(std::move(windows));

  if (ens.keep_terminal) {
    Table t{"terminal", {"run"}, {}};
    for (Index i = 0; i < eig.size(); ++i) t.header.push_back("x" + std::to_string(i + 1));
    for (Index r = 0; r < runs; ++r) {
      std::vector<double> row{static_cast<double>(r)};
      const Vector& x = st.terminal[static_cast<std::size_t>(r)];
      for (Index i = 0; i < x.size(); ++i) row.push_back(x[i]);
      t.rows.push_back(std::move(row));
    }
    out.tables.push_back(std::move(t));
  }
  return out;
}

}  // namespace

ExperimentKind stationary_ball_kind() {
  ExperimentKind k;
  k.name = "stationary-ball";
  k.figure = "Fig. 4";
  k.description = "DNSAM SDE ensemble near a 2-d saddle: ball occupancy and crossings";
  k.params = {
      {"hessian", ParamType::numbers, fixed(Json::array({1.0, -1.0})),
       "diagonal of H; [1, 1] gives the convex case"},
      {"x0", ParamType::numbers, fixed(Json::array({0.02, 0.02})), "starting point"},
      {"eta", ParamType::number, fixed(0.001), "learning rate"},
      {"rho", ParamType::number, sqrt_of("eta"), "perturbation radius (default sqrt(eta))"},
      {"sigma", ParamType::number, fixed(0.001), "standard deviation of the gradient noise"},
      {"sde", ParamType::string, fixed("dnsam"), "SDE variant"},
      {"mc_samples", ParamType::integer, fixed(64), "Monte Carlo samples inside SDE coefficients"},
      {"runs", ParamType::integer, scaled(10000, 100000), "trajectories"},
      {"steps", ParamType::integer, fixed(50000), "iterations"},
      {"radius", ParamType::number, fixed(0.007), "ball radius"},
      {"window", ParamType::integer, fixed(1000), "iterations per crossing-count window"},
      {"settle", ParamType::integer, fixed(5000), "windows from this iteration on are checked"},
      {"trend_window", ParamType::integer, fixed(5000), "window for the mean outside-count trend"},
      {"terminal", ParamType::boolean, fixed(true), "write terminal.csv with the final points"},
      stride_param(10, 1),
  };
  k.run = run;
  return k;
}

}  // namespace samsde::runner
