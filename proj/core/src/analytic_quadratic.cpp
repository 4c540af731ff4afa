// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/analytic_quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace samsde::quadratic {

std::optional<double> QuadSpec::lambda_star() const {
  std::optional<double> best;
  for (Index i = 0; i < eigvals.size(); ++i) {
    const double l = eigvals[i];
    if (l < 0.0 && (!best || l > *best)) best = l;
  }
  return best;
}

QuadSpec quad_spec_from(const SymMatrix& h, double rho, double eta, double noise) {
  QuadSpec s;
  s.eigvals = sym_eigendecompose(h).values;
  s.rho = rho;
  s.eta = eta;
  s.noise = noise;
  return s;
}

Vector usam_ode_solution(const Vector& x0, const QuadSpec& spec, double t) {
  if (x0.size() != spec.eigvals.size()) {
    throw PreconditionError("usam_ode_solution: x0 and spectrum sizes differ");
  }
  if (!(t >= 0.0)) throw PreconditionError("usam_ode_solution: t must be >= 0");
  const auto& l = spec.eigvals.array();
  return (x0.array() * (-l * (1.0 + spec.rho * l) * t).exp()).matrix();
}

double usam_saddle_threshold(double lambda_star) {
  if (!(lambda_star < 0.0)) {
    throw PreconditionError("usam_saddle_threshold: lambda_star must be negative");
  }
  return -1.0 / lambda_star;
}

StationaryLaw usam_stationary(const QuadSpec& spec, Index i) {
  if (i < 0 || i >= spec.eigvals.size()) {
    throw PreconditionError("usam_stationary: eigen-index out of range");
  }
  const double l = spec.eigvals[i];
  const double a = l * (1.0 + spec.rho * l);
  if (!(a > 0.0)) {
    throw NonNormalizable("usam_stationary: lambda (1 + rho lambda) <= 0, no stationary law");
  }
  StationaryLaw law;
  law.variance = spec.eta * spec.noise * spec.noise * (1.0 + spec.rho * l) / (2.0 * l);
  const double var = law.variance;
  law.pdf = [var](double x) {
    return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var);
  };
  return law;
}

double em_ou_stationary_variance(double a, double b2, double dt) {
  if (!(a * dt > 0.0 && a * dt < 2.0)) {
    throw PreconditionError("em_ou_stationary_variance: need 0 < a dt < 2");
  }
  return b2 / (a * (2.0 - a * dt));
}

Vector sam_ode_drift_quad(const Vector& x, const SymMatrix& h, double rho, double eps_floor) {
  const Vector hx = h.matrix() * x;
  const double scale = rho / std::max(hx.norm(), eps_floor);
  return -(hx + scale * (h.matrix() * hx));
}

double sam_lyapunov_derivative(const Vector& x_eig, const Vector& eigvals, double rho) {
  const double hx_norm = (eigvals.array() * x_eig.array()).matrix().norm();
  if (hx_norm == 0.0) return 0.0;
  const auto l = eigvals.array();
  return -(l * (1.0 + rho * l / hx_norm) * x_eig.array().square()).sum();
}

bool sam_attractor_check(const Vector& x, const SymMatrix& h, double rho) {
  const auto ls = quad_spec_from(h, rho, 1.0, 0.0).lambda_star();
  if (!ls) return true;
  return (h.matrix() * x).norm() <= -rho * *ls;
}

PullPush dnsam_pull_push_classify(const Vector& x, const SymMatrix& h, double rho, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("dnsam_pull_push_classify: eps must be > 0");
  const double hx = (h.matrix() * x).norm();
  if (hx < eps) return PullPush::pushed;
  const auto ls = quad_spec_from(h, rho, 1.0, 0.0).lambda_star();
  if (!ls || hx <= -rho * *ls) return PullPush::pulled;
  return PullPush::outside;
}

namespace {

Vector psd_spectrum(const SymMatrix& h, const char* who) {
  const Vector l = sym_eigendecompose(h).values;
  const double tol = 1e-12 * std::max(1.0, l.cwiseAbs().maxCoeff());
  if (l.size() > 0 && l.minCoeff() < -tol) {
    throw PreconditionError(std::string(who) + ": H must be positive semi-definite");
  }
  return l;
}

}  // namespace

double usam_suboptimality(const SymMatrix& h, double rho, double eta) {
  const Vector l = psd_spectrum(h, "usam_suboptimality");
  const double t1 = l.sum();
  const double t2 = l.array().square().sum();
  const double t3 = l.array().cube().sum();
  return 0.25 * eta * (t1 + 2.0 * rho * t2 + rho * rho * t3);
}

double usam_stationary_loss(const SymMatrix& h, double rho, double eta) {
  const Vector l = psd_spectrum(h, "usam_stationary_loss");
  return 0.25 * eta * (l.sum() + rho * l.array().square().sum());
}

}  // namespace samsde::quadratic
