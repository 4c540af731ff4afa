// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

// validate-sde: weak error of each SDE against its discrete algorithm, and of
// the SGD SDE against the same algorithm, swept over rho.

#include "common.hpp"
#include "samsde/dataset.hpp"
#include "samsde/mlp.hpp"
#include "samsde/models.hpp"
#include "samsde/rng.hpp"

#include <optional>

namespace samsde::runner {
namespace {

using namespace detail;

DefaultFn by_model(Json quadratic, Json deep_linear, Json deep_nonlinear, Json teacher) {
  return [=](const Json& r, bool) {
    const std::string m = r.at("model").get<std::string>();
    if (m == "deep-linear") return deep_linear;
    if (m == "deep-nonlinear") return deep_nonlinear;
    if (m == "teacher-student") return teacher;
    return quadratic;
  };
}

struct Problem {
  LossModelPtr model;
  Vector x0;
};

Problem build_problem(const RunContext& ctx) {
  const Json& p = ctx.params;
  const std::string model = get_string(p, "model");
  const double scale = non_negative(p, "x0_scale");
  if (model == "quadratic") {
    const Index d = count_param(p, "dim");
    RngStream rng(ctx.derive("hessian"), 0);
    return {quadratic_model(random_spd_hessian(d, rng)), Vector::Constant(d, scale)};
  }
  require(model == "deep-linear" || model == "deep-nonlinear" || model == "teacher-student",
          "model", "expected quadratic, deep-linear, deep-nonlinear or teacher-student");
  const Index n = count_param(p, "examples");
  const Index features = count_param(p, "features");
  const Index depth = count_param(p, "depth", 0);
  const std::string csv = get_string(p, "dataset_csv");
  const std::uint64_t data_seed = ctx.derive("dataset");

  std::shared_ptr<const Dataset> data;
  MlpArch arch;
  if (model == "teacher-student") {
    SynthOptions opt;
    opt.teacher_depth = count_param(p, "teacher_depth", 0);
    opt.teacher_width = count_param(p, "width");
    data = std::make_shared<const Dataset>(csv.empty() ? synth_teacher(n, features, data_seed, opt).data
                                                       : load_dataset_csv(csv));
    arch.activation = Activation::sigmoid;
    arch.head = LossHead::mse;
  } else {
    SynthOptions opt;
    opt.classes = model == "deep-linear" ? 3 : 2;
    data = std::make_shared<const Dataset>(csv.empty() ? synth_dataset("blobs", n, features, data_seed, opt)
                                                       : load_dataset_csv(csv));
    if (model == "deep-linear") {
      arch.activation = Activation::identity;
      arch.head = LossHead::cross_entropy;
    } else {
      arch.activation = Activation::sigmoid;
      arch.head = LossHead::logistic_l2;
      arch.l2 = 0.1;
    }
  }
  const Index width = get_integer(p, "width") > 0 ? count_param(p, "width") : data->feature_dim();
  arch.widths.push_back(data->feature_dim());
  for (Index i = 0; i < depth; ++i) arch.widths.push_back(width);
  Index outputs = 1;
  if (arch.head == LossHead::cross_entropy) outputs = std::max<Index>(data->num_classes, 2);
  arch.widths.push_back(outputs);
  RngStream rng(ctx.derive("init"), 0);
  const auto m = mlp_model(arch, data);
  return {m, mlp_init(arch, rng, scale > 0.0 ? scale : 1.0)};
}

struct Alg {
  std::string name;
  Variant discrete;
  SdeVariant sde;
};

Alg parse_alg(const std::string& name, bool general) {
  if (name == "sgd") return {name, Variant::sgd, SdeVariant::sgd};
  if (name == "usam") {
    return {name, Variant::usam, general ? SdeVariant::usam_general : SdeVariant::usam_simplified};
  }
  if (name == "dnsam") return {name, Variant::dnsam, SdeVariant::dnsam};
  if (name == "sam") {
    return {name, Variant::sam, general ? SdeVariant::sam_general : SdeVariant::sam_simplified};
  }
  throw ConfigError("params.algorithms", "unknown algorithm '" + name +
                                             "' (expected sgd, usam, dnsam or sam)");
}

Output run(const RunContext& ctx) {
  const Json& p = ctx.params;
  const double eta = positive(p, "eta");
  const double sigma = non_negative(p, "sigma");
  const std::vector<double> rhos = get_numbers(p, "rhos");
  require(!rhos.empty(), "rhos", "must not be empty");
  for (double r : rhos) require(r >= 0.0 && std::isfinite(r), "rhos", "entries must be >= 0");
  const std::string form = get_string(p, "sde_form");
  require(form == "simplified" || form == "general", "sde_form", "expected simplified or general");
  std::vector<Alg> algs;
  for (const auto& n : get_strings(p, "algorithms")) algs.push_back(parse_alg(n, form == "general"));
  require(!algs.empty(), "algorithms", "must not be empty");
  const Index repeats = count_param(p, "repeats");
  const Index mc = count_param(p, "mc_samples");
  const auto stride = count_param(p, "stride");

  const Problem prob = build_problem(ctx);
  const GradOracle oracle = GradOracle::additive_gaussian(sigma);
  const std::vector<TestFunction> tests = default_test_functions();
  EnsembleSpec ens;
  ens.runs = count_param(p, "runs");
  ens.steps = count_param(p, "steps");
  ens.x0 = prob.x0;
  ens.threads = ctx.threads;

  Output out;
  out.metric("dimension", static_cast<double>(prob.model->dim()));

  // err[g][alg][rho] summed over repeats, with squared SEs. Repeats whose
  // SDE covariance was rejected do not count towards the matched average.
  struct Acc {
    double matched = 0.0, matched_se2 = 0.0, sgd = 0.0, sgd_se2 = 0.0;
    Index matched_n = 0;
    double matched_mean() const {
      return matched_n > 0 ? matched / static_cast<double>(matched_n) : std::nan("");
    }
    double matched_se() const {
      return matched_n > 0 ? std::sqrt(matched_se2) / static_cast<double>(matched_n)
                           : std::nan("");
    }
  };
  std::vector<std::vector<std::vector<Acc>>> acc(
      tests.size(), std::vector<std::vector<Acc>>(algs.size(), std::vector<Acc>(rhos.size())));
  Index diverged = 0;

  for (Index rep = 0; rep < repeats; ++rep) {
    ens.base_seed = ctx.derive("sgd-sde", static_cast<std::uint64_t>(rep));
    const EnsembleStats sgd_sde =
        run_sde_ensemble(SdeSystem(SdeVariant::sgd, prob.model, oracle, make_cfg(eta, 0.0, mc)),
                         ens, tests);
    diverged += sgd_sde.diverged();
    if (rep == 0) {
      for (const auto& t : tests) {
        out.series.push_back(from_stats("sgd-sde/" + t.name, sgd_sde.get(t.name), stride));
      }
    }
    for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
      const double rho = rhos[ri];
      for (std::size_t ai = 0; ai < algs.size(); ++ai) {
        const Alg& a = algs[ai];
        ens.base_seed = ctx.derive("discrete", static_cast<std::uint64_t>(rep));
        const EnsembleStats disc =
            run_discrete_ensemble(make_spec(a.discrete, eta, rho), *prob.model, oracle, ens, tests);
        ens.base_seed = ctx.derive("sde", static_cast<std::uint64_t>(rep));
        const std::string tag = label("rho=%g/", rho) + a.name;
        // An assembled covariance beyond the clamp tolerance is reported, and
        // that repeat is left out of the matched average.
        std::optional<EnsembleStats> sde;
        try {
          sde = run_sde_ensemble(SdeSystem(a.sde, prob.model, oracle, make_cfg(eta, rho, mc)),
                                 ens, tests);
        } catch (const IndefiniteCovariance& e) {
          out.metric(label("rep%g/", static_cast<double>(rep)) + tag + "/indefinite_covariance",
                     e.min_eigenvalue());
        }
        diverged += disc.diverged() + (sde ? sde->diverged() : 0);
        for (std::size_t gi = 0; gi < tests.size(); ++gi) {
          const std::string& g = tests[gi].name;
          const WeakError es = weak_error(disc, sgd_sde, g);
          Acc& c = acc[gi][ai][ri];
          if (sde) {
            const WeakError em = weak_error(disc, *sde, g);
            c.matched += em.value;
            c.matched_se2 += em.se * em.se;
            ++c.matched_n;
          }
          c.sgd += es.value;
          c.sgd_se2 += es.se * es.se;
          if (rep == 0) {
            out.series.push_back(from_stats(tag + "/discrete/" + g, disc.get(g), stride));
            if (sde) out.series.push_back(from_stats(tag + "/sde/" + g, sde->get(g), stride));
          }
        }
      }
    }
  }

  const auto reps = static_cast<double>(repeats);
  for (std::size_t gi = 0; gi < tests.size(); ++gi) {
    const std::string& g = tests[gi].name;
    Plot plot{"weak-error-" + g, "maximum absolute error in " + g, "rho", "weak error", true, true,
              {}};
    for (std::size_t ai = 0; ai < algs.size(); ++ai) {
      PlotSeries pm{algs[ai].name + " SDE", rhos, {}};
      PlotSeries ps{algs[ai].name + " vs SGD SDE", rhos, {}};
      for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
        const Acc& c = acc[gi][ai][ri];
        const std::string tag = "weak_error/" + algs[ai].name + label("/rho=%g/", rhos[ri]) + g;
        out.metric(tag + "/matched", c.matched_mean(), c.matched_se());
        if (c.matched_n < repeats) {
          out.metric(tag + "/matched_repeats", static_cast<double>(c.matched_n));
        }
        out.metric(tag + "/sgd-sde", c.sgd / reps, std::sqrt(c.sgd_se2) / reps);
        pm.y.push_back(c.matched_mean());
        ps.y.push_back(c.sgd / reps);
      }
      plot.series.push_back(std::move(pm));
      plot.series.push_back(std::move(ps));
    }
    out.plots.push_back(std::move(plot));
  }

  // g2 against time for each rho (first repeat).
  for (double rho : rhos) {
    Plot plot{label("g2-rho=%g", rho), label("g2 along the trajectory, rho = %g", rho), "iteration",
              "E f(x)", false, false, {}};
    for (const auto& s : out.series) {
      const std::string prefix = label("rho=%g/", rho);
      if (s.name.rfind(prefix, 0) == 0 && s.name.size() > 3 &&
          s.name.compare(s.name.size() - 3, 3, "/g2") == 0) {
        plot.series.push_back(plot_of(s, s.name.substr(prefix.size(), s.name.size() - prefix.size() - 3)));
      }
    }
    for (const auto& s : out.series) {
      if (s.name == "sgd-sde/g2") plot.series.push_back(plot_of(s, "sgd-sde"));
    }
    out.plots.push_back(std::move(plot));
  }
  out.metric("diverged", static_cast<double>(diverged));
  return out;
}

}  // namespace

ExperimentKind validate_sde_kind() {
  ExperimentKind k;
  k.name = "validate-sde";
  k.figure = "Figs. 2-3";
  k.description = "weak error of each SDE vs its algorithm, and of the SGD SDE, across rho";
  k.params = {
      {"model", ParamType::string, fixed("quadratic"),
       "quadratic, deep-linear, deep-nonlinear or teacher-student"},
      {"dim", ParamType::integer, fixed(20), "dimension of the quadratic"},
      {"examples", ParamType::integer, by_model(0, 150, 200, 64), "dataset size (MLP models)"},
      {"features", ParamType::integer, by_model(0, 4, 30, 5), "input features (MLP models)"},
      {"depth", ParamType::integer, by_model(0, 1, 1, 20), "hidden layers (MLP models)"},
      {"width", ParamType::integer, by_model(0, 0, 0, 10),
       "hidden width (MLP models); 0 means the feature count"},
      {"teacher_depth", ParamType::integer, fixed(20), "hidden layers of the linear teacher"},
      {"dataset_csv", ParamType::string, fixed(""), "load the dataset from CSV instead"},
      {"eta", ParamType::number, by_model(0.01, 0.01, 0.01, 0.001), "learning rate"},
      {"sigma", ParamType::number, by_model(0.01, 0.01, 0.01, 0.001),
       "standard deviation of the additive gradient noise"},
      {"rhos", ParamType::numbers,
       by_model(Json::array({0.001, 0.01, 0.1, 0.5}), Json::array({0.001, 0.01, 0.1, 0.2}),
                Json::array({0.001, 0.01, 0.1, 0.5}), Json::array({0.0001, 0.001, 0.03, 0.05})),
       "perturbation radii"},
      {"algorithms", ParamType::strings, fixed(Json::array({"sgd", "usam", "dnsam", "sam"})),
       "discrete algorithms, each paired with its SDE"},
      {"sde_form", ParamType::string, fixed("simplified"), "simplified or general"},
      {"x0_scale", ParamType::number, fixed(0.02),
       "quadratic: x0 = x0_scale * ones; MLP: init scale"},
      {"runs", ParamType::integer, scaled(32, 200), "trajectories per ensemble"},
      {"steps", ParamType::integer, fixed(1000), "iterations"},
      {"repeats", ParamType::integer, fixed(3), "independent repeats averaged in summary.csv"},
      {"mc_samples", ParamType::integer, fixed(64), "Monte Carlo samples inside SDE coefficients"},
      stride_param(10, 1),
  };
  k.run = run;
  return k;
}

}  // namespace samsde::runner
