// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/core_math.hpp"

#include <functional>
#include <optional>

namespace samsde::quadratic {

/// Spectrum and hyperparameters of f(x) = x^T H x / 2 in the eigenbasis of H,
/// with isotropic gradient noise of standard deviation `noise`.
struct QuadSpec {
  Vector eigvals;  // descending
  double rho = 0.0;
  double eta = 0.01;
  double noise = 0.0;

  /// Largest (closest to zero) negative eigenvalue, if any.
  std::optional<double> lambda_star() const;
};

QuadSpec quad_spec_from(const SymMatrix& h, double rho, double eta, double noise);

/// X_t^j = X_0^j exp(-lambda_j (1 + rho lambda_j) t), coordinates in the eigenbasis.
Vector usam_ode_solution(const Vector& x0, const QuadSpec& spec, double t);

/// -1 / lambda_star; above it USAM is attracted by the saddle.
double usam_saddle_threshold(double lambda_star);

/// Thrown when lambda (1 + rho lambda) <= 0 and no stationary law exists.
class NonNormalizable : public Error {
 public:
  using Error::Error;
};

struct StationaryLaw {
  double variance = 0.0;
  std::function<double(double)> pdf;
};

/// Stationary law of coordinate i of the USAM SDE on the quadratic:
/// centred Gaussian with variance eta s^2 (1 + rho lambda_i) / (2 lambda_i).
StationaryLaw usam_stationary(const QuadSpec& spec, Index i);

/// Stationary variance of the Euler-Maruyama chain with step dt for
/// dX = -a X dt + b dW, namely b^2 / (a (2 - a dt)): the continuum value
/// b^2 / (2 a) inflated by 2 / (2 - a dt). Requires 0 < a dt < 2.
double em_ou_stationary_variance(double a, double b2, double dt);

/// -H (I + rho H / max(|Hx|, eps)) x.
Vector sam_ode_drift_quad(const Vector& x, const SymMatrix& h, double rho, double eps_floor);

/// Time derivative of V(x) = |x|^2 / 2 along the quadratic SAM ODE, in the
/// eigenbasis: -sum_i lambda_i (1 + rho lambda_i / |Hx|) x_i^2.
double sam_lyapunov_derivative(const Vector& x_eig, const Vector& eigvals, double rho);

/// |Hx| <= -rho lambda_star; always true for positive semi-definite H.
bool sam_attractor_check(const Vector& x, const SymMatrix& h, double rho);

enum class PullPush { pulled, pushed, outside };

/// pushed when |Hx| < eps; pulled when |Hx| lies in [eps, -rho lambda_star]
/// (or [eps, inf) for PSD H); outside otherwise.
PullPush dnsam_pull_push_classify(const Vector& x, const SymMatrix& h, double rho, double eps);

/// (eta / 4) (Tr H + 2 rho Tr H^2 + rho^2 Tr H^3).
double usam_suboptimality(const SymMatrix& h, double rho, double eta);

/// Exact long-run mean of f for dX = -H(I + rho H) X dt + (I + rho H) sqrt(eta H) dW,
/// which is (eta / 4) (Tr H + rho Tr H^2).
double usam_stationary_loss(const SymMatrix& h, double rho, double eta);

}  // namespace samsde::quadratic
