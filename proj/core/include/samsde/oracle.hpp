// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/models.hpp"

#include <optional>
#include <vector>

namespace samsde {

class RngStream;

enum class OracleKind { additive_gaussian, minibatch };

/// One realisation of the gradient noise: the additive vector Z, or the
/// multiset of example indices for a minibatch.
struct NoiseDraw {
  Vector z;
  std::vector<Index> batch;
};

/// Source of stochastic gradients grad f_gamma(x).
///
/// additive_gaussian adds Z = C w to the full gradient, with C either sigma * I
/// or a fixed d x d square root of the covariance. minibatch averages
/// per-example gradients over B indices drawn uniformly with replacement.
/// A draw is taken once and can then be evaluated at several points, which is
/// how SAM-type updates share one gamma between ascent and descent.
class GradOracle {
 public:
  static GradOracle additive_gaussian(double sigma);
  static GradOracle additive_gaussian_cov_sqrt(Matrix cov_sqrt);
  static GradOracle minibatch(Index batch_size);

  OracleKind kind() const noexcept { return kind_; }
  bool is_additive() const noexcept { return kind_ == OracleKind::additive_gaussian; }
  double sigma() const noexcept { return sigma_; }
  Index batch_size() const noexcept { return batch_; }
  /// Non-null when the additive noise has a general covariance root.
  const Matrix* cov_sqrt_matrix() const noexcept { return cov_sqrt_ ? &*cov_sqrt_ : nullptr; }

  /// Throws PreconditionError if the oracle cannot serve `model`.
  void check(const LossModel& model) const;

  void draw(const LossModel& model, RngStream& rng, NoiseDraw& out) const;
  NoiseDraw draw(const LossModel& model, RngStream& rng) const;

  /// grad f_gamma(x) for a fixed draw.
  void gradient(const LossModel& model, const Vector& x, const NoiseDraw& d, Vector& out) const;
  /// Hessian of f_gamma at x (the full Hessian under additive noise).
  void hessian(const LossModel& model, const Vector& x, const NoiseDraw& d, Matrix& out) const;
  void hessian_vector(const LossModel& model, const Vector& x, const NoiseDraw& d,
                      const Vector& v, Vector& out) const;

  /// Sigma^SGD(x), the covariance of grad f_gamma(x). Constant for additive
  /// noise; for minibatches the per-example covariance divided by B.
  SymMatrix sgd_covariance(const LossModel& model, const Vector& x) const;
  /// A square root of sgd_covariance; exact C for additive noise.
  Matrix sgd_covariance_sqrt(const LossModel& model, const Vector& x,
                             double clamp_tol = kDefaultClampTol) const;

 private:
  OracleKind kind_ = OracleKind::additive_gaussian;
  double sigma_ = 0.0;
  std::optional<Matrix> cov_sqrt_;
  Index batch_ = 0;
};

/// A fresh stochastic gradient at x.
Vector oracle_sample(const LossModel& model, const GradOracle& oracle, const Vector& x,
                     RngStream& rng);

}  // namespace samsde
