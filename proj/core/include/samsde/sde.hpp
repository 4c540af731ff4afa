// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/oracle.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace samsde {

class RngStream;

enum class SdeVariant {
  sgd,
  usam_general,
  usam_simplified,
  dnsam,
  sam_general,
  sam_simplified,
  rsam_drift,
};

/// Names: "sgd", "usam-general", "usam", "dnsam", "sam-general", "sam", "rsam".
/// "usam-simplified" and "sam-simplified" are accepted as spellings of the
/// simplified forms.
SdeVariant parse_sde_variant(std::string_view name);
std::string_view to_string(SdeVariant v);
/// Variants whose construction assumes constant additive gradient noise.
bool needs_additive_noise(SdeVariant v);

struct SdeConfig {
  double eta = 0.01;
  double rho = 0.0;
  Index mc_samples = 64;
  double clamp_tol = kDefaultClampTol;
  double eps_floor = 1e-12;
  Index substeps = 1;  // integrator steps per learning-rate interval
  double rsam_sigma = 0.0;

  void validate() const;
};

/// Scratch space for the allocation-free evaluation paths.
struct SdeWorkspace {
  Vector g, hg, v, w, a_mean, b_mean, tmp;
  Matrix h, a, b;
  NoiseDraw draw;
  void resize(Index d, Index samples);
};

/// Drift b(x) and diffusion D(x) of dX = b dt + D dW for one SDE model.
/// D already carries the sqrt(eta) factor of the weak-approximation SDEs, so
/// an Euler step of size dt adds D w sqrt(dt).
///
/// Expectation terms are Monte-Carlo estimates from cfg.mc_samples fresh
/// oracle draws at each call, so drift and diffusion use independent draws.
class SdeSystem {
 public:
  SdeSystem(SdeVariant variant, LossModelPtr model, GradOracle oracle, SdeConfig cfg);

  Index dim() const { return model_->dim(); }
  SdeVariant variant() const noexcept { return variant_; }
  const SdeConfig& config() const noexcept { return cfg_; }
  const LossModel& model() const noexcept { return *model_; }
  const GradOracle& oracle() const noexcept { return oracle_; }
  /// False when D is identically zero (RSAM drift ODE, or zero additive noise
  /// on a variant whose diffusion is proportional to it).
  bool has_diffusion() const noexcept { return has_diffusion_; }

  void drift(const Vector& x, RngStream& rng, Vector& out, SdeWorkspace& ws) const;
  Vector drift(const Vector& x, RngStream& rng) const;

  /// Total diffusion covariance D D^T (including the eta factor).
  Matrix diffusion_covariance(const Vector& x, RngStream& rng, SdeWorkspace& ws) const;
  Matrix diffusion_covariance(const Vector& x, RngStream& rng) const;
  Matrix diffusion_sqrt(const Vector& x, RngStream& rng) const;

  /// out = D(x) w with w standard normal. Monte-Carlo draws inside D come
  /// first, then w. Same law as diffusion_sqrt(x) * w; the SGD, simplified
  /// USAM and DNSAM forms are applied in factored form, (I + c H) sqrt(eta) C w,
  /// without building D.
  void noise_increment(const Vector& x, RngStream& rng, Vector& out, SdeWorkspace& ws) const;

 private:
  bool factored() const;
  double curvature_factor(const Vector& grad) const;
  void mc_pairs(const Vector& x, RngStream& rng, SdeWorkspace& ws) const;
  Matrix mc_cross_covariance(SdeWorkspace& ws) const;

  SdeVariant variant_;
  LossModelPtr model_;
  GradOracle oracle_;
  SdeConfig cfg_;
  bool has_diffusion_ = true;
  bool isotropic_ = false;  // additive noise with C = sigma I
  Matrix noise_sqrt_;       // C for additive noise
};

SdeSystem build_sde(SdeVariant variant, LossModelPtr model, GradOracle oracle, SdeConfig cfg);

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

/// E|grad f_gamma(x)| from `samples` draws, with its standard error.
McEstimate mc_expected_grad_norm(const LossModel& model, const GradOracle& oracle,
                                 const Vector& x, Index samples, RngStream& rng);

/// Non-finite state during integration.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(Index step);
  Index step() const noexcept { return step_; }

 private:
  Index step_;
};

/// Called with (k, X_{k eta}) for k = 0..steps; return false to stop early.
using EmObserver = std::function<bool(Index, const Vector&)>;

/// Euler-Maruyama from x0, reporting the state at every multiple of eta.
/// Each learning-rate interval is split into cfg.substeps steps of size
/// dt = eta / substeps: x <- x + b(x) dt + D(x) w sqrt(dt). Returns the number
/// of intervals completed. Throws DivergenceError on a non-finite state.
Index em_run(const SdeSystem& sys, const Vector& x0, Index steps, RngStream& rng,
             const EmObserver& observe);

/// The full trajectory, steps + 1 states including x0.
std::vector<Vector> em_integrate(const SdeSystem& sys, const Vector& x0, Index steps,
                                 RngStream& rng);

}  // namespace samsde
