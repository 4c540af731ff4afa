// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

// interplay-hessian / interplay-rho: loss of SGD and the SAM family on a
// quadratic when either the Hessian or rho is multiplied by a factor.

#include "common.hpp"
#include "samsde/models.hpp"
#include "samsde/rng.hpp"

namespace samsde::runner {
namespace {

using namespace detail;

enum class Scaled { hessian, rho };

std::vector<ParamSpec> interplay_params() {
  return {
      {"dim", ParamType::integer, fixed(100), "dimension"},
      {"lambda_min", ParamType::number, fixed(0.01), "smallest Hessian eigenvalue"},
      {"lambda_max", ParamType::number, fixed(1.0), "largest Hessian eigenvalue"},
      {"eta", ParamType::number, fixed(0.001), "learning rate"},
      {"rho", ParamType::number, sqrt_of("eta"), "perturbation radius (default sqrt(eta))"},
      {"sigma", ParamType::number, fixed(0.01), "standard deviation of the gradient noise"},
      {"scales", ParamType::numbers, fixed(Json::array({1.0, 2.0, 4.0})), "multipliers"},
      {"algorithms", ParamType::strings, fixed(Json::array({"dnsam", "usam", "sam"})),
       "compared against SGD"},
      {"x0_scale", ParamType::number, fixed(0.02), "x0 = x0_scale * ones"},
      {"runs", ParamType::integer, fixed(5), "trajectories per ensemble"},
      {"steps", ParamType::integer, fixed(20000), "iterations"},
      {"tail_fraction", ParamType::number, fixed(0.1),
       "final fraction of iterations averaged for the tail loss"},
      stride_param(20, 1),
  };
}

ResultSeries ratio_series(std::string name, const SeriesStats& a, const SeriesStats& b,
                          std::int64_t stride) {
  ResultSeries r;
  r.name = std::move(name);
  const auto n = static_cast<std::int64_t>(std::min(a.mean.size(), b.mean.size()));
  for (std::int64_t k = 0; k < n; ++k) {
    if (k % stride != 0 && k != n - 1) continue;
    const double q = a.mean[k] / b.mean[k];
    const double rel = std::hypot(a.se[k] / a.mean[k], b.se[k] / b.mean[k]);
    r.push(k, q, std::abs(q) * rel, std::min(a.count[k], b.count[k]));
  }
  return r;
}

Output run(const RunContext& ctx, Scaled what) {
  const Json& p = ctx.params;
  const Index d = count_param(p, "dim");
  const double lo = positive(p, "lambda_min");
  const double hi = positive(p, "lambda_max");
  require(hi >= lo, "lambda_max", "must be >= lambda_min");
  const double eta = positive(p, "eta");
  const double rho = non_negative(p, "rho");
  const double sigma = non_negative(p, "sigma");
  const std::vector<double> scales = get_numbers(p, "scales");
  require(!scales.empty(), "scales", "must not be empty");
  for (double s : scales) require(s > 0.0 && std::isfinite(s), "scales", "entries must be > 0");
  std::vector<std::pair<std::string, Variant>> algs;
  for (const auto& n : get_strings(p, "algorithms")) algs.emplace_back(n, parse_optimizer(n, "algorithms"));
  const double tail = get_number(p, "tail_fraction");
  require(tail > 0.0 && tail <= 1.0, "tail_fraction", "must be in (0, 1]");
  const auto stride = count_param(p, "stride");

  RngStream hr(ctx.derive("hessian"), 0);
  const SymMatrix h = random_diagonal_hessian(d, lo, hi, 0, hr);
  const GradOracle oracle = GradOracle::additive_gaussian(sigma);
  const std::vector<TestFunction> tests{{"g2", test_g2}};
  EnsembleSpec ens;
  ens.runs = count_param(p, "runs");
  ens.steps = count_param(p, "steps");
  ens.x0 = Vector::Constant(d, non_negative(p, "x0_scale"));
  ens.threads = ctx.threads;
  const Index tail_from = ens.steps - static_cast<Index>(std::floor(tail * static_cast<double>(ens.steps)));

  Output out;
  auto run_one = [&](const std::string& name, Variant v, double hscale, double r) {
    const auto model = quadratic_model(h.scaled(hscale));
    ens.base_seed = ctx.derive(name);
    EnsembleStats st = run_discrete_ensemble(make_spec(v, eta, r), *model, oracle, ens, tests);
    const auto [m, se] = tail_mean(st.get("g2"), tail_from);
    out.metric("tail_loss/" + name, m, se);
    record_divergence(out, name, st);
    out.series.push_back(from_stats(name + "/g2", st.get("g2"), stride));
    return st;
  };

  // Reference curves: SGD on the unscaled problem, plus every algorithm at
  // the unscaled radius in the rho sweep.
  const EnsembleStats sgd_ref = run_one("sgd/scale=1", Variant::sgd, 1.0, 0.0);
  std::vector<EnsembleStats> alg_ref;
  if (what == Scaled::rho) {
    for (const auto& [name, v] : algs) alg_ref.push_back(run_one(name + "/scale=1", v, 1.0, rho));
  }

  for (std::size_t ai = 0; ai < algs.size(); ++ai) {
    const auto& [name, v] = algs[ai];
    Plot loss{"loss-" + name, what == Scaled::hessian ? "SGD and " + name + ", Hessian scaled"
                                                      : "SGD and " + name + ", rho scaled",
              "iteration", "E f(x)", false, true, {}};
    Plot ratio{"ratio-" + name,
               what == Scaled::hessian ? name + " loss / unscaled SGD loss"
                                       : name + " loss / unscaled " + name + " loss",
               "iteration", "ratio", false, false, {}};
    for (double s : scales) {
      const std::string tag = label("/scale=%g", s);
      EnsembleStats st;
      if (what == Scaled::hessian) {
        if (ai == 0 && s != 1.0) run_one("sgd" + tag, Variant::sgd, s, 0.0);
        st = run_one(name + tag, v, s, rho);
      } else {
        st = s == 1.0 ? alg_ref[ai] : run_one(name + tag, v, 1.0, s * rho);
      }
      const SeriesStats& ref = what == Scaled::hessian ? sgd_ref.get("g2") : alg_ref[ai].get("g2");
      ResultSeries rs = ratio_series("ratio/" + name + tag, st.get("g2"), ref, stride);
      const auto [a, ase] = tail_mean(st.get("g2"), tail_from);
      const auto [b, bse] = tail_mean(ref, tail_from);
      out.metric("tail_ratio/" + name + tag, a / b, std::abs(a / b) * std::hypot(ase / a, bse / b));
      ratio.series.push_back(plot_of(rs, label("scale %g", s)));
      out.series.push_back(std::move(rs));
    }
    for (const auto& s : out.series) {
      const bool sgd = s.name.rfind("sgd/", 0) == 0;
      const bool mine = s.name.rfind(name + "/", 0) == 0;
      if (sgd || mine) loss.series.push_back(plot_of(s, s.name.substr(0, s.name.size() - 3)));
    }
    out.plots.push_back(std::move(loss));
    out.plots.push_back(std::move(ratio));
  }
  return out;
}

}  // namespace

ExperimentKind interplay_hessian_kind() {
  ExperimentKind k;
  k.name = "interplay-hessian";
  k.figure = "Figs. 8-10";
  k.description = "SGD vs SAM family on a quadratic as the Hessian is scaled up";
  k.params = interplay_params();
  k.run = [](const RunContext& c) { return run(c, Scaled::hessian); };
  return k;
}

ExperimentKind interplay_rho_kind() {
  ExperimentKind k;
  k.name = "interplay-rho";
  k.figure = "Figs. 11-12";
  k.description = "SGD vs SAM family on a quadratic as rho is scaled up";
  k.params = interplay_params();
  k.run = [](const RunContext& c) { return run(c, Scaled::rho); };
  return k;
}

}  // namespace samsde::runner
