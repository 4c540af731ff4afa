// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

// Saddle experiments: discrete optimizers started near the critical point at
// the origin, classified as stuck / escaped / returned.

#include "common.hpp"
#include "samsde/models.hpp"
#include "samsde/rng.hpp"

namespace samsde::runner {
namespace {

using namespace detail;

struct Setting {
  std::string name;  // empty for a single setting
  Vector x0;
  X0Sampler sampler;
  double ref_norm;  // |x0| used for the escape thresholds
};

std::vector<ParamSpec> optimizer_params(Json full_batch, Json stochastic) {
  return {
      {"full_batch", ParamType::strings, fixed(std::move(full_batch)),
       "optimizers run on exact gradients (gd, sgd, sam, usam, dnsam, rsam)"},
      {"stochastic", ParamType::strings, fixed(std::move(stochastic)),
       "optimizers run with additive gradient noise"},
      {"far_factor", ParamType::number, fixed(10.0), "escaped: final |x| > far_factor |x0|"},
      {"near_factor", ParamType::number, fixed(0.1),
       "stuck: |x| never above max(near_factor |x0|, |x0|)"},
  };
}

void append(std::vector<ParamSpec>& a, std::vector<ParamSpec> b) {
  for (auto& s : b) a.push_back(std::move(s));
}

Output run_saddle(const RunContext& ctx, const LossModelPtr& model,
                  const std::vector<Setting>& settings) {
  const Json& p = ctx.params;
  const double eta = positive(p, "eta");
  const double rho = non_negative(p, "rho");
  const double sigma = non_negative(p, "sigma");
  const double far_factor = positive(p, "far_factor");
  const double near_factor = positive(p, "near_factor");
  require(far_factor > near_factor, "far_factor", "must exceed near_factor");
  const auto runs = optimizer_runs(p);
  const auto stride = count_param(p, "stride");

  EnsembleSpec ens;
  ens.runs = count_param(p, "runs");
  ens.steps = count_param(p, "steps");
  ens.threads = ctx.threads;
  const std::vector<TestFunction> tests{{"loss", test_g2}, {"distance", distance_from_origin}};
  const GradOracle exact = GradOracle::additive_gaussian(0.0);
  const GradOracle noisy = GradOracle::additive_gaussian(sigma);
  const Vector origin = Vector::Zero(model->dim());
  const double origin_loss = model->value(origin);

  Output out;
  out.metric("loss_at_origin", origin_loss);
  for (const OptimizerRun& o : runs) {
    Plot loss{"loss-" + o.name, o.name + (o.full_batch ? " (full batch)" : " (stochastic)"),
              "iteration", "E f(x)", false, false, {}};
    Plot dist{"distance-" + o.name, o.name + ": distance from the saddle", "iteration",
              "E |x|", false, true, {}};
    for (const Setting& s : settings) {
      const std::string name = o.name + (s.name.empty() ? "" : "/" + s.name);
      ens.x0 = s.x0;
      ens.x0_sampler = s.sampler;
      // Same seed for every optimizer at a given setting: sampled starts agree.
      ens.base_seed = ctx.derive("runs/" + s.name);
      EscapeMetric esc(ens.runs, origin, far_factor * s.ref_norm, near_factor * s.ref_norm);
      const EnsembleStats st = run_discrete_ensemble(make_spec(o.variant, eta, rho), *model,
                                                     o.full_batch ? exact : noisy, ens, tests, {&esc});
      const SeriesStats& l = st.get("loss");
      out.metric(name + "/final_loss", l.mean.back(), l.se.back());
      if (origin_loss != 0.0) out.metric(name + "/loss_drop", 1.0 - l.mean.back() / origin_loss);
      const SeriesStats& d = st.get("distance");
      out.metric(name + "/final_distance", d.mean.back(), d.se.back());
      record_escape(out, name, esc);
      record_divergence(out, name, st);
      ResultSeries rl = from_stats(name + "/loss", l, stride);
      ResultSeries rd = from_stats(name + "/distance", d, stride);
      const std::string legend = s.name.empty() ? o.name : s.name;
      loss.series.push_back(plot_of(rl, legend));
      dist.series.push_back(plot_of(rd, legend));
      out.series.push_back(std::move(rl));
      out.series.push_back(std::move(rd));
    }
    out.plots.push_back(std::move(loss));
    out.plots.push_back(std::move(dist));
  }
  return out;
}

std::vector<Setting> scaled_starts(const Json& p, Index dim, bool gaussian) {
  std::vector<Setting> out;
  const auto scales = get_numbers(p, "scales");
  require(!scales.empty(), "scales", "must not be empty");
  for (double s : scales) {
    require(s > 0.0 && std::isfinite(s), "scales", "entries must be > 0");
    Setting st{label("scale=%g", s), Vector::Constant(dim, s), {},
               s * std::sqrt(static_cast<double>(dim))};
    if (gaussian) {
      st.sampler = [s, dim](Index, RngStream& rng) -> Vector { return s * rng.normal_vector(dim); };
    }
    out.push_back(std::move(st));
  }
  return out;
}

SymMatrix flipped_hessian(const RunContext& ctx) {
  const Json& p = ctx.params;
  const Index d = count_param(p, "dim");
  const Index flipped = count_param(p, "flipped", 0);
  require(flipped <= d, "flipped", "must not exceed dim");
  const double lo = positive(p, "lambda_min");
  const double hi = positive(p, "lambda_max");
  require(hi >= lo, "lambda_max", "must be >= lambda_min");
  RngStream rng(ctx.derive("hessian"), 0);
  return random_diagonal_hessian(d, lo, hi, flipped, rng);
}

std::vector<ParamSpec> hessian_params(Index dim, Index flipped) {
  return {
      {"dim", ParamType::integer, fixed(dim), "dimension"},
      {"flipped", ParamType::integer, fixed(flipped), "smallest eigenvalues made negative"},
      {"lambda_min", ParamType::number, fixed(0.01), "smallest |eigenvalue| before flipping"},
      {"lambda_max", ParamType::number, fixed(1.0), "largest eigenvalue"},
  };
}

std::vector<ParamSpec> step_params(double eta, double sigma, Json runs, Json steps) {
  return {
      {"eta", ParamType::number, fixed(eta), "learning rate"},
      {"rho", ParamType::number, sqrt_of("eta"), "perturbation radius (default sqrt(eta))"},
      {"sigma", ParamType::number, fixed(sigma), "standard deviation of the gradient noise"},
      {"runs", ParamType::integer, fixed(std::move(runs)), "trajectories per optimizer and setting"},
      {"steps", ParamType::integer, steps.is_array() ? scaled(steps[0], steps[1]) : fixed(steps),
       "iterations"},
  };
}

}  // namespace

ExperimentKind saddle_escape_2d_kind() {
  ExperimentKind k;
  k.name = "saddle-escape-2d";
  k.figure = "Fig. 13";
  k.description = "GD, USAM, SAM and noisy variants from (0, 0.01) on diag(1, -1)";
  k.params = {
      {"hessian", ParamType::numbers, fixed(Json::array({1.0, -1.0})), "diagonal of H"},
      {"x0", ParamType::numbers, fixed(Json::array({0.0, 0.01})), "starting point"},
  };
  append(k.params, step_params(0.001, 0.001, 3, 20000));
  append(k.params, optimizer_params(Json::array({"gd", "usam", "sam"}),
                                    Json::array({"sgd", "pusam", "dnsam", "psam"})));
  k.params.push_back(stride_param(10, 1));
  k.run = [](const RunContext& ctx) {
    const Vector eig = to_vector(get_numbers(ctx.params, "hessian"));
    const Vector x0 = to_vector(get_numbers(ctx.params, "x0"));
    require(eig.size() >= 1, "hessian", "must not be empty");
    require(x0.size() == eig.size(), "x0", "length must match hessian");
    require(x0.norm() > 0.0, "x0", "must differ from the saddle at the origin");
    return run_saddle(ctx, quadratic_model(SymMatrix::diagonal(eig)), {{"", x0, {}, x0.norm()}});
  };
  return k;
}

ExperimentKind saddle_escape_highdim_kind() {
  ExperimentKind k;
  k.name = "saddle-escape-highdim";
  k.figure = "Fig. 13";
  k.description = "SAM, PSAM, DNSAM from x0 = scale * ones near a d = 400 saddle";
  k.params = hessian_params(400, 10);
  append(k.params, step_params(0.001, 0.001, 3, Json::array({20000, 50000})));
  k.params.push_back({"scales", ParamType::numbers, fixed(Json::array({1.0, 1e-4, 1e-8})),
                      "x0 = scale * ones"});
  append(k.params, optimizer_params(Json::array({"sam"}), Json::array({"psam", "dnsam"})));
  k.params.push_back(stride_param(20, 1));
  k.run = [](const RunContext& ctx) {
    const auto model = quadratic_model(flipped_hessian(ctx));
    return run_saddle(ctx, model, scaled_starts(ctx.params, model->dim(), false));
  };
  return k;
}

ExperimentKind autoencoder_saddle_kind() {
  ExperimentKind k;
  k.name = "autoencoder-saddle";
  k.figure = "Fig. 5";
  k.description = "linear autoencoder |W2 W1 - I|^2 initialised at scale * N(0, 1) near the origin";
  k.params = {{"width", ParamType::integer, fixed(20), "d: the model fits W2 W1 to I_d"}};
  append(k.params, step_params(0.001, 0.001, 3, 10000));
  k.params.push_back({"scales", ParamType::numbers,
                      fixed(Json::array({1e-2, 1e-3, 5e-3, 1e-4, 1e-5})), "initialisation scales"});
  append(k.params, optimizer_params(Json::array({"sam"}),
                                    Json::array({"sgd", "dnsam", "psam", "pusam"})));
  k.params.push_back(stride_param(10, 1));
  k.run = [](const RunContext& ctx) {
    const auto model = linear_autoencoder_model(count_param(ctx.params, "width"));
    return run_saddle(ctx, model, scaled_starts(ctx.params, model->dim(), true));
  };
  return k;
}

ExperimentKind embedded_saddle_kind() {
  ExperimentKind k;
  k.name = "embedded-saddle";
  k.figure = "Fig. 16";
  k.description = "x'Hx/2 + lambda sum x^4 with a d = 400 saddle at the origin";
  k.params = hessian_params(400, 10);
  k.params.push_back({"lambda", ParamType::number, fixed(0.001), "quartic coefficient"});
  append(k.params, step_params(0.005, 0.001, 3, Json::array({20000, 200000})));
  k.params.push_back({"scales", ParamType::numbers,
                      fixed(Json::array({1e-2, 1e-3, 5e-3, 1e-4, 1e-5})),
                      "x0 = scale * N(0, I)"});
  append(k.params, optimizer_params(Json::array({"sam"}),
                                    Json::array({"sgd", "dnsam", "psam", "pusam"})));
  k.params.push_back(stride_param(100, 10));
  k.run = [](const RunContext& ctx) {
    const double lambda = non_negative(ctx.params, "lambda");
    const auto model = embedded_saddle_model(flipped_hessian(ctx), lambda);
    return run_saddle(ctx, model, scaled_starts(ctx.params, model->dim(), true));
  };
  return k;
}

}  // namespace samsde::runner
