// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

// suboptimality: long-run mean loss of the USAM SDE on a quadratic with
// gradient-noise covariance equal to H, against the closed forms.

#include "common.hpp"
#include "samsde/analytic_quadratic.hpp"
#include "samsde/models.hpp"
#include "samsde/rng.hpp"

namespace samsde::runner {
namespace {

using namespace detail;

/// Per-run time average of f over iterations after `burn`.
class TailAverage final : public PathMetric {
 public:
  TailAverage(Index runs, Index burn, LossModelPtr model)
      : burn_(burn), model_(std::move(model)), avg_(static_cast<std::size_t>(runs), 0.0) {}

  std::unique_ptr<PathMetric> fresh() const override {
    return std::make_unique<TailAverage>(static_cast<Index>(avg_.size()), burn_, model_);
  }
  void begin(Index run) override {
    run_ = run;
    sum_ = 0.0;
    n_ = 0;
  }
  void observe(Index k, const Vector& x) override {
    if (k <= burn_) return;
    sum_ += model_->value(x);
    ++n_;
  }
  void end(Index run, Index diverged_at) override {
    avg_[static_cast<std::size_t>(run)] =
        diverged_at >= 0 || n_ == 0 ? std::nan("") : sum_ / static_cast<double>(n_);
  }
  void merge(const PathMetric& other) override {
    const auto& o = dynamic_cast<const TailAverage&>(other);
    for (std::size_t r = 0; r < avg_.size(); ++r) {
      if (o.avg_[r] != 0.0) avg_[r] = o.avg_[r];
    }
  }
  const std::vector<double>& averages() const { return avg_; }

 private:
  Index burn_;
  LossModelPtr model_;
  std::vector<double> avg_;
  Index run_ = -1;
  double sum_ = 0.0;
  Index n_ = 0;
};

Output run(const RunContext& ctx) {
  const Json& p = ctx.params;
  const Index d = count_param(p, "dim");
  const double eta = positive(p, "eta");
  const std::vector<double> rhos = get_numbers(p, "rhos");
  require(!rhos.empty(), "rhos", "must not be empty");
  for (double r : rhos) require(r >= 0.0 && std::isfinite(r), "rhos", "entries must be >= 0");
  const Index burn = count_param(p, "burn_in", 0);
  const auto stride = count_param(p, "stride");

  RngStream hr(ctx.derive("hessian"), 0);
  const SymMatrix h = random_spd_hessian(d, hr);
  const auto model = quadratic_model(h);
  const GradOracle oracle = GradOracle::additive_gaussian_cov_sqrt(psd_sqrt(h).root.matrix());
  EnsembleSpec ens;
  ens.runs = count_param(p, "chains", 2);
  ens.steps = burn + count_param(p, "steps");
  ens.x0 = Vector::Zero(d);
  ens.threads = ctx.threads;
  const std::vector<TestFunction> tests{{"g2", test_g2}};

  Output out;
  const Vector l = sym_eigendecompose(h).values;
  for (Index i = 0; i < d; ++i) out.metric("eigenvalue/" + std::to_string(i + 1), l[i]);

  PlotSeries measured{"SDE long-run mean", {}, {}};
  PlotSeries stated{"(eta/4)(TrH + 2 rho TrH^2 + rho^2 TrH^3)", {}, {}};
  PlotSeries exact{"(eta/4)(TrH + rho TrH^2)", {}, {}};
  Plot traj{"loss", "E f(X_t) across chains", "iteration", "E f", false, false, {}};
  for (double rho : rhos) {
    const std::string tag = label("rho=%g", rho);
    const SdeSystem sys(SdeVariant::usam_simplified, model, oracle, make_cfg(eta, rho));
    ens.base_seed = ctx.derive("chains");
    TailAverage avg(ens.runs, burn, model);
    const EnsembleStats st = run_sde_ensemble(sys, ens, tests, {&avg});
    double m = 0.0;
    Index n = 0;
    for (double v : avg.averages()) {
      if (std::isfinite(v)) {
        m += v;
        ++n;
      }
    }
    m /= static_cast<double>(std::max<Index>(n, 1));
    double spread = 0.0;
    for (double v : avg.averages()) {
      if (std::isfinite(v)) spread += (v - m) * (v - m);
    }
    const double se = n > 1 ? std::sqrt(spread / static_cast<double>(n - 1) / static_cast<double>(n))
                            : std::nan("");
    const double s = quadratic::usam_suboptimality(h, rho, eta);
    const double e = quadratic::usam_stationary_loss(h, rho, eta);
    out.metric(tag + "/long_run_loss", m, se);
    out.metric(tag + "/stated_formula", s);
    out.metric(tag + "/exact_stationary", e);
    out.metric(tag + "/rel_err_stated", m / s - 1.0);
    out.metric(tag + "/rel_err_exact", m / e - 1.0);
    record_divergence(out, tag, st);
    measured.x.push_back(rho);
    measured.y.push_back(m);
    stated.x.push_back(rho);
    stated.y.push_back(s);
    exact.x.push_back(rho);
    exact.y.push_back(e);
    ResultSeries rs = from_stats(tag + "/g2", st.get("g2"), stride);
    traj.series.push_back(plot_of(rs, tag));
    out.series.push_back(std::move(rs));
  }
  out.plots.push_back({"suboptimality", "long-run E f against rho", "rho", "E f", false, false,
                       {measured, stated, exact}});
  out.plots.push_back(std::move(traj));
  return out;
}

}  // namespace

ExperimentKind suboptimality_kind() {
  ExperimentKind k;
  k.name = "suboptimality";
  k.figure = "no figure";
  k.description = "long-run loss of the USAM SDE with noise covariance H vs closed forms";
  k.params = {
      {"dim", ParamType::integer, fixed(3), "dimension of the random SPD Hessian"},
      {"eta", ParamType::number, fixed(0.01), "learning rate"},
      {"rhos", ParamType::numbers, fixed(Json::array({0.0, 0.05, 0.1, 0.2})), "radii"},
      {"chains", ParamType::integer, scaled(16, 32), "independent chains"},
      {"burn_in", ParamType::integer, fixed(20000), "iterations discarded per chain"},
      {"steps", ParamType::integer, fixed(200000), "iterations averaged per chain"},
      stride_param(200, 10),
  };
  k.run = run;
  return k;
}

}  // namespace samsde::runner
