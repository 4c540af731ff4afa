// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. Each criterion prints one line:
//
//   criterion <n> PASS|FAIL <title>: <measurements> [<seconds> s]
//
// Usage: samsde_acceptance [--criterion N]...   (no flag runs all nine)
// The exit status is non-zero if any selected criterion fails.

#include "samsde/analytic_quadratic.hpp"
#include "samsde/dataset.hpp"
#include "samsde/harness.hpp"
#include "samsde/metrics.hpp"
#include "samsde/mlp.hpp"
#include "samsde/rng.hpp"

#include "fd_check.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace samsde {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const GradOracle kExact = GradOracle::additive_gaussian(0.0);

OptimizerSpec make_spec(Variant v, double eta, double rho) {
  OptimizerSpec s;
  s.variant = v;
  s.eta = eta;
  s.rho = rho;
  return s;
}

SdeConfig make_cfg(double eta, double rho, Index mc = 64) {
  SdeConfig c;
  c.eta = eta;
  c.rho = rho;
  c.mc_samples = mc;
  return c;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// 1. RK4 on the deterministic USAM flow against the closed form.
Outcome criterion_1() {
  RngStream rng(0xA1, 0);
  const SymMatrix h = random_diagonal_hessian(20, 0.01, 1.0, 3, rng);
  const Vector l = h.matrix().diagonal();
  const Vector x0 = rng.normal_vector(20);
  quadratic::QuadSpec spec;
  spec.eigvals = l;
  spec.rho = 0.5;
  const Vector a = (l.array() * (1.0 + spec.rho * l.array())).matrix();
  auto f = [&](const Vector& x) { return Vector(-(a.array() * x.array()).matrix()); };
  const double dt = 1e-3;
  Vector x = x0;
  double worst = 0.0;
  for (int i = 1; i <= 5000; ++i) {
    const Vector k1 = f(x);
    const Vector k2 = f(x + 0.5 * dt * k1);
    const Vector k3 = f(x + 0.5 * dt * k2);
    const Vector k4 = f(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const Vector exact = quadratic::usam_ode_solution(x0, spec, i * dt);
    worst = std::max(worst, (x - exact).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-6, fmt("max |rk4 - closed form| over t in [0, 5] = %.3g (tol 1e-6)", worst)};
}

// 2. Long-run variance of the 1-d USAM SDE against eta s^2 (1 + rho l) / (2 l).
Outcome criterion_2() {
  const double lambda = 1.0;
  const double eta = 1e-3;
  const double s = 1.0;
  const Index chains = 16;
  const Index burn = 10000;
  const Index steps = 1000000;
  const auto m = quadratic_model(SymMatrix::identity(1));
  const GradOracle o = GradOracle::additive_gaussian(s);
  Outcome out{true, ""};
  for (double rho : {0.0, 0.5}) {
    const SdeSystem sys(SdeVariant::usam_simplified, m, o, make_cfg(eta, rho));
    std::vector<double> vars;
    for (Index c = 0; c < chains; ++c) {
      RngStream rng = ensemble_stream(0xA2, c);
      double mean = 0.0;
      double m2 = 0.0;
      Index n = 0;
      em_run(sys, Vector::Zero(1), burn + steps, rng, [&](Index k, const Vector& x) {
        if (k > burn) {
          ++n;
          const double d = x[0] - mean;
          mean += d / static_cast<double>(n);
          m2 += d * (x[0] - mean);
        }
        return true;
      });
      vars.push_back(m2 / static_cast<double>(n - 1));
    }
    double v = 0.0;
    for (double x : vars) v += x;
    v /= static_cast<double>(chains);
    double spread = 0.0;
    for (double x : vars) spread += (x - v) * (x - v);
    const double se = std::sqrt(spread / (chains - 1.0) / chains);
    quadratic::QuadSpec q;
    q.eigvals = Vector::Constant(1, lambda);
    q.rho = rho;
    q.eta = eta;
    q.noise = s;
    const double want = quadratic::usam_stationary(q, 0).variance;
    const double rel = std::abs(v / want - 1.0);
    const double rel_alt = std::abs(v / (2.0 * want) - 1.0);
    out.pass = out.pass && rel < 0.05;
    out.detail += fmt("rho=%g: var %.5g (se %.2g) vs %.5g, rel err %.2f%% (tol 5%%; doubled "
                      "variance would be off by %.0f%%); ",
                      rho, v, se, want, 100.0 * rel, 100.0 * rel_alt);
  }
  out.detail += fmt("%lld chains x 1e6 steps after 1e4 burn-in", static_cast<long long>(chains));
  return out;
}

// 3. Weak-error ordering on the d = 20 quadratic.
Outcome criterion_3() {
  const Index d = 20;
  const double eta = 0.01;
  const double s = 0.01;
  RngStream hr(0xA3, 0);
  const auto m = quadratic_model(random_diagonal_hessian(d, 0.01, 1.0, 0, hr));
  const GradOracle o = GradOracle::additive_gaussian(s);
  const std::vector<TestFunction> g1{{"g1", test_g1}};
  EnsembleSpec ens;
  ens.runs = 200;
  ens.steps = 1000;
  ens.x0 = Vector::Constant(d, 0.02);
  ens.threads = 0;

  struct Alg {
    const char* name;
    Variant discrete;
    SdeVariant sde;
  };
  const Alg algs[] = {{"usam", Variant::usam, SdeVariant::usam_simplified},
                      {"dnsam", Variant::dnsam, SdeVariant::dnsam},
                      {"sam", Variant::sam, SdeVariant::sam_simplified}};

  ens.base_seed = 0xA3000;
  const EnsembleStats sgd_sde =
      run_sde_ensemble(SdeSystem(SdeVariant::sgd, m, o, make_cfg(eta, 0.0)), ens, g1);

  Outcome out{true, ""};
  for (double rho : {std::sqrt(eta), eta}) {
    const bool large = rho > 2.0 * eta;
    for (const Alg& a : algs) {
      ens.base_seed = 0xA3100;
      const EnsembleStats disc = run_discrete_ensemble(make_spec(a.discrete, eta, rho), *m, o, ens, g1);
      ens.base_seed = 0xA3200;
      const EnsembleStats sde = run_sde_ensemble(SdeSystem(a.sde, m, o, make_cfg(eta, rho)), ens, g1);
      const WeakError em = weak_error(disc, sde, "g1");
      const WeakError es = weak_error(disc, sgd_sde, "g1");
      bool ok = false;
      if (large) {
        const double combined = std::hypot(em.se, es.se);
        ok = es.value - em.value > 4.0 * combined;
        out.detail += fmt("rho=%.3g %s: matched %.3g < sgd %.3g, gap %.2f combined se; ", rho,
                          a.name, em.value, es.value, (es.value - em.value) / combined);
      } else {
        const double ratio = std::max(em.value, es.value) / std::min(em.value, es.value);
        ok = ratio <= 2.0;
        out.detail += fmt("rho=%.3g %s: matched %.3g vs sgd %.3g, ratio %.2f (tol 2); ", rho,
                          a.name, em.value, es.value, ratio);
      }
      out.pass = out.pass && ok && disc.diverged() == 0 && sde.diverged() == 0;
    }
  }
  return out;
}

// 4. Deterministic USAM on diag(1, -1) either side of the threshold rho = 1.
Outcome criterion_4() {
  const auto m = quadratic_model(SymMatrix::diagonal(vec2(1.0, -1.0)));
  const double thr = quadratic::usam_saddle_threshold(-1.0);
  RngStream rng(0xA4, 0);
  StepWorkspace ws;

  Vector x = vec2(0.0, 0.01);
  Index hit = -1;
  for (Index k = 1; k <= 3000 && hit < 0; ++k) {
    step_inplace(make_spec(Variant::usam, 0.01, 2.0), *m, kExact, x, rng, ws);
    if (x.norm() < 1e-6) hit = k;
  }
  x = vec2(0.0, 0.01);
  Index escape = -1;
  for (Index k = 1; k <= 100000 && escape < 0; ++k) {
    step_inplace(make_spec(Variant::usam, 0.01, 0.5), *m, kExact, x, rng, ws);
    if (std::abs(x[1]) > 1e3) escape = k;
  }
  return {thr == 1.0 && hit > 0 && escape > 0,
          fmt("threshold %g; rho=2 reaches |x| < 1e-6 at step %lld (limit 3000); rho=0.5 has "
              "|x_2| > 1e3 at step %lld",
              thr, static_cast<long long>(hit), static_cast<long long>(escape))};
}

// 5. Full-batch SAM inside and outside the attractor |Hx| <= -rho lambda*.
Outcome criterion_5() {
  const SymMatrix h = SymMatrix::diagonal(vec2(1.0, -1.0));
  const auto m = quadratic_model(h);
  const double eta = 1e-3;
  const double rho = std::sqrt(eta);
  const OptimizerSpec spec = make_spec(Variant::sam, eta, rho);
  RngStream rng(0xA5, 0);
  StepWorkspace ws;

  Vector x = vec2(0.0, 0.5 * rho);
  double worst = 0.0;
  for (Index k = 0; k < 100000; ++k) {
    step_inplace(spec, *m, kExact, x, rng, ws);
    worst = std::max(worst, (h.matrix() * x).norm());
  }
  const bool inside = worst <= 2.0 * rho;

  x = vec2(0.0, 10.0 * rho);
  Index escape = -1;
  for (Index k = 1; k <= 1000000 && escape < 0; ++k) {
    step_inplace(spec, *m, kExact, x, rng, ws);
    if (x.norm() > 1e3) escape = k;
  }
  return {inside && escape > 0,
          fmt("from |Hx0| = rho/2: max |Hx_k| over 1e5 steps = %.3g (bound 2 rho = %.3g); from "
              "|Hx0| = 10 rho: |x| > 1e3 at step %lld",
              worst, 2.0 * rho, static_cast<long long>(escape))};
}

// 6. DNSAM-SDE ensemble near the saddle: entry, persistent jumps, slow escape.
Outcome criterion_6() {
  const auto m = quadratic_model(SymMatrix::diagonal(vec2(1.0, -1.0)));
  const double eta = 1e-3;
  const SdeSystem sys(SdeVariant::dnsam, m, GradOracle::additive_gaussian(1e-3),
                      make_cfg(eta, std::sqrt(eta)));
  const Index runs = 10000;
  const Index steps = 50000;
  EnsembleSpec ens;
  ens.runs = runs;
  ens.steps = steps;
  ens.x0 = vec2(0.02, 0.02);
  ens.base_seed = 0xA6;
  ens.threads = 0;
  BallOccupancyMetric metric(runs, steps, 0.007, Vector::Zero(2));
  const EnsembleStats st = run_sde_ensemble(sys, ens, {}, {&metric});
  const BallOccupancy& occ = metric.result();

  const Index entered = occ.ever_entered();
  Index quiet_windows = 0;
  std::int64_t min_jumps = -1;
  for (Index b = 5000; b < steps; b += 1000) {
    const std::int64_t j = occ.jumps_between(b, b + 1000);
    if (j == 0) ++quiet_windows;
    min_jumps = min_jumps < 0 ? j : std::min(min_jumps, j);
  }
  std::vector<double> outside;
  for (Index b = 5000; b + 5000 <= steps; b += 5000) outside.push_back(occ.mean_outside(b, b + 5000));
  Index nondecreasing = 0;
  for (std::size_t i = 1; i < outside.size(); ++i) {
    if (outside[i] >= outside[i - 1]) ++nondecreasing;
  }
  const auto pairs = static_cast<Index>(outside.size()) - 1;
  const bool a = entered == runs;
  const bool b = quiet_windows == 0;
  const bool c = static_cast<double>(nondecreasing) >= 0.8 * static_cast<double>(pairs);
  std::ostringstream trend;
  for (double v : outside) trend << v << ' ';
  return {a && b && c && st.diverged() == 0,
          fmt("(a) %lld/%lld entered; (b) min jumps per 1e3 window after 5000 = %lld, quiet "
              "windows %lld; (c) %lld/%lld window pairs non-decreasing, mean outside = [ %s]; "
              "diverged %lld",
              static_cast<long long>(entered), static_cast<long long>(runs),
              static_cast<long long>(min_jumps), static_cast<long long>(quiet_windows),
              static_cast<long long>(nondecreasing), static_cast<long long>(pairs),
              trend.str().c_str(), static_cast<long long>(st.diverged()))};
}

// 7. Full-batch SAM on the linear autoencoder from two initialisation scales.
Outcome criterion_7() {
  const Index d = 20;
  const auto m = linear_autoencoder_model(d);
  const double eta = 1e-3;
  const OptimizerSpec spec = make_spec(Variant::sam, eta, std::sqrt(eta));
  const double origin = m->value(Vector::Zero(m->dim()));
  auto final_loss = [&](double scale) {
    RngStream rng(0xA7, 0);
    Vector x = scale * rng.normal_vector(m->dim());
    StepWorkspace ws;
    for (Index k = 0; k < 10000; ++k) step_inplace(spec, *m, kExact, x, rng, ws);
    return m->value(x);
  };
  const double near = final_loss(1e-3);
  const double far = final_loss(1e-2);
  const double drop_near = 1.0 - near / origin;
  const double drop_far = 1.0 - far / origin;
  return {drop_near < 0.01 && drop_far > 0.5,
          fmt("loss at origin %g; scale 1e-3: final %.4g (drop %.3f%%, need < 1%%); scale 1e-2: "
              "final %.4g (drop %.1f%%, need > 50%%)",
              origin, near, 100.0 * drop_near, far, 100.0 * drop_far)};
}

// 8. Long-run mean loss of the USAM SDE with Sigma = H against the stated expression.
Outcome criterion_8() {
  RngStream hr(0xA8, 0);
  const SymMatrix h = random_spd_hessian(3, hr);
  const double rho = 0.1;
  const double eta = 0.01;
  const auto m = quadratic_model(h);
  const GradOracle o = GradOracle::additive_gaussian_cov_sqrt(psd_sqrt(h).root.matrix());
  const SdeSystem sys(SdeVariant::usam_simplified, m, o, make_cfg(eta, rho));
  const Index chains = 32;
  const Index burn = 20000;
  const Index steps = 200000;
  std::vector<double> means;
  for (Index c = 0; c < chains; ++c) {
    RngStream rng = ensemble_stream(0xA8, c);
    double sum = 0.0;
    em_run(sys, Vector::Zero(3), burn + steps, rng, [&](Index k, const Vector& x) {
      if (k > burn) sum += m->value(x);
      return true;
    });
    means.push_back(sum / static_cast<double>(steps));
  }
  double mean = 0.0;
  for (double v : means) mean += v;
  mean /= static_cast<double>(chains);
  double spread = 0.0;
  for (double v : means) spread += (v - mean) * (v - mean);
  const double se = std::sqrt(spread / (chains - 1.0) / chains);
  const double stated = quadratic::usam_suboptimality(h, rho, eta);
  const double exact = quadratic::usam_stationary_loss(h, rho, eta);
  const double rel = std::abs(mean / stated - 1.0);
  const Vector l = sym_eigendecompose(h).values;
  return {rel < 0.1,
          fmt("eigenvalues (%.3g, %.3g, %.3g); long-run E f = %.5g (se %.2g) vs stated %.5g, rel "
              "err %.2f%% (tol 10%%); exact stationary value %.5g",
              l[0], l[1], l[2], mean, se, stated, 100.0 * rel, exact)};
}

// 9. Oracle and derivative property suite.
Outcome criterion_9() {
  int checks = 0;
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) failed.push_back(what);
  };
  RngStream rng(0xA9, 0);

  // Gradients against differences of the loss, Hessian symmetry.
  auto blobs = std::make_shared<const Dataset>(synth_dataset("blobs", 24, 3, 91));
  SynthOptions three;
  three.classes = 3;
  auto blobs3 = std::make_shared<const Dataset>(synth_dataset("blobs", 30, 3, 92, three));
  auto teacher = std::make_shared<const Dataset>(synth_dataset("teacher", 20, 3, 93));
  struct Case {
    LossModelPtr model;
    double scale;
    double tol;
  };
  const std::vector<Case> cases = {
      {quadratic_model(random_spd_hessian(6, rng)), 1.0, 1e-6},
      {embedded_saddle_model(random_diagonal_hessian(4, 0.1, 1.0, 1, rng), 0.001), 2.0, 1e-6},
      {linear_autoencoder_model(3), 1.0, 1e-6},
      {mlp_model({{3, 4, 3}, Activation::sigmoid, LossHead::cross_entropy}, blobs3), 1.0, 1e-4},
      {mlp_model({{3, 4, 1}, Activation::sigmoid, LossHead::logistic_l2, 0.1}, blobs), 1.0, 1e-4},
      {mlp_model({{3, 4, 1}, Activation::sigmoid, LossHead::mse}, teacher), 1.0, 1e-4},
  };
  for (const Case& c : cases) {
    const double floor = c.tol > 1e-5 ? 1e-3 : 1.0;
    for (int p = 0; p < 20; ++p) {
      const Vector x = c.scale * rng.normal_vector(c.model->dim());
      expect(testing::rel_error(c.model->gradient(x), testing::fd_gradient(*c.model, x), floor) <
                 c.tol,
             c.model->name() + " gradient");
      Matrix h(c.model->dim(), c.model->dim());
      c.model->hessian(x, h);
      expect(is_symmetric(h, 1e-6), c.model->name() + " hessian symmetry");
    }
  }

  // Symmetric square roots and eigendecompositions.
  for (Index d : {1, 2, 5, 10, 25, 50}) {
    const SymMatrix a = random_spd_hessian(d, rng);
    const PsdRoot r = psd_sqrt(a);
    const Matrix rm = r.root.matrix();
    expect(relative_frobenius(rm * rm, a.matrix()) < 1e-10, fmt("psd_sqrt d=%lld", (long long)d));
    expect(relative_frobenius(sym_eigendecompose(a).reconstruct(), a.matrix()) < 1e-10,
           fmt("eigen reconstruct d=%lld", (long long)d));
  }

  // rho = 0 reduction of the optimizers (bitwise) and of the SDEs.
  const auto q = quadratic_model(random_diagonal_hessian(5, 0.1, 1.0, 1, rng));
  const GradOracle noisy = GradOracle::additive_gaussian(0.1);
  const Vector x0 = rng.normal_vector(5);
  auto path = [&](Variant v) {
    RngStream r(0xA90, 0);
    StepWorkspace ws;
    Vector x = x0;
    std::vector<Vector> out;
    for (int k = 0; k < 100; ++k) {
      step_inplace(make_spec(v, 0.05, 0.0), *q, noisy, x, r, ws);
      out.push_back(x);
    }
    return out;
  };
  const auto sgd = path(Variant::sgd);
  const auto pgd = path(Variant::pgd);
  for (Variant v : {Variant::sam, Variant::usam, Variant::dnsam}) {
    expect(path(v) == sgd, std::string(to_string(v)) + " rho=0");
  }
  for (Variant v : {Variant::psam, Variant::pusam, Variant::pdnsam}) {
    expect(path(v) == pgd, std::string(to_string(v)) + " rho=0");
  }
  const SdeSystem sgd_sde(SdeVariant::sgd, q, noisy, make_cfg(0.01, 0.0));
  for (SdeVariant v : {SdeVariant::usam_general, SdeVariant::usam_simplified, SdeVariant::dnsam,
                       SdeVariant::sam_general, SdeVariant::sam_simplified}) {
    const SdeSystem sys(v, q, noisy, make_cfg(0.01, 0.0));
    bool ok = true;
    for (int p = 0; p < 50; ++p) {
      const Vector x = rng.normal_vector(5);
      ok = ok && sys.drift(x, rng) == sgd_sde.drift(x, rng);
      ok = ok && (sys.diffusion_covariance(x, rng) - sgd_sde.diffusion_covariance(x, rng))
                         .cwiseAbs()
                         .maxCoeff() < 1e-16;
    }
    expect(ok, std::string(to_string(v)) + " sde rho=0");
  }

  // Chi mean of the noise norm at a critical point.
  const McEstimate chi = mc_expected_grad_norm(*quadratic_model(SymMatrix::identity(2)),
                                               GradOracle::additive_gaussian(1.0), Vector::Zero(2),
                                               100000, rng);
  const double chi_z = (chi.mean - std::sqrt(std::numbers::pi / 2.0)) / chi.se;
  expect(std::abs(chi_z) < 3.0, "chi mean");

  std::string detail = fmt("%d/%d checks passed; chi mean %.5f (z = %.2f)",
                           checks - static_cast<int>(failed.size()), checks, chi.mean, chi_z);
  for (const auto& f : failed) detail += "; failed: " + f;
  return {failed.empty(), detail};
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

constexpr Criterion kCriteria[] = {
    {1, "usam ode closed form", criterion_1},
    {2, "stationary variance", criterion_2},
    {3, "weak-error ordering", criterion_3},
    {4, "usam saddle threshold", criterion_4},
    {5, "sam attractor", criterion_5},
    {6, "dnsam ball occupancy", criterion_6},
    {7, "autoencoder saddle", criterion_7},
    {8, "stationary suboptimality", criterion_8},
    {9, "oracle and derivative suite", criterion_9},
};

}  // namespace
}  // namespace samsde

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty()) {
    for (const auto& c : samsde::kCriteria) selected.push_back(c.id);
  }
  bool all = true;
  for (int id : selected) {
    const samsde::Criterion* c = nullptr;
    for (const auto& k : samsde::kCriteria) {
      if (k.id == id) c = &k;
    }
    if (c == nullptr) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    samsde::Outcome out;
    try {
      out = c->run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d %s %s: %s [%.2f s]\n", c->id, out.pass ? "PASS" : "FAIL", c->title,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
