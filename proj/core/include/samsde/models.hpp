// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/core_math.hpp"

#include <memory>
#include <span>
#include <string>

namespace samsde {

enum class HessianKind { analytic, finite_difference };

/// A twice-differentiable objective on R^dim.
///
/// Implementations are immutable after construction and safe to evaluate from
/// several threads at once. Output arguments must already have the right size
/// for the in-place overloads; they are never resized on the hot path.
///
/// Models with finite-sum structure (num_examples() > 0) additionally expose
/// the loss restricted to a multiset of example indices; Minibatch oracles
/// draw those. The batch loss is the mean over the listed examples, so the
/// mean over a uniformly drawn batch is the full loss.
class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual Index dim() const = 0;
  virtual std::string name() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual void gradient(const Vector& x, Vector& out) const = 0;

  /// Central differences of gradient() unless overridden.
  virtual void hessian(const Vector& x, Matrix& out) const;
  /// out = hessian(x) * v. Central differences along v unless overridden.
  virtual void hessian_vector(const Vector& x, const Vector& v, Vector& out) const;
  virtual HessianKind hessian_kind() const { return HessianKind::finite_difference; }

  /// Trace of the Hessian and its gradient (a third-derivative contraction).
  virtual double trace_hessian(const Vector& x) const;
  virtual void gradient_trace_hessian(const Vector& x, Vector& out) const;

  virtual Index num_examples() const { return 0; }
  virtual double batch_value(const Vector& x, std::span<const Index> batch) const;
  virtual void batch_gradient(const Vector& x, std::span<const Index> batch, Vector& out) const;
  virtual void batch_hessian(const Vector& x, std::span<const Index> batch, Matrix& out) const;
  virtual void batch_hessian_vector(const Vector& x, std::span<const Index> batch,
                                    const Vector& v, Vector& out) const;

  Vector gradient(const Vector& x) const;
  SymMatrix hessian(const Vector& x) const;
  Vector hessian_vector(const Vector& x, const Vector& v) const;
};

using LossModelPtr = std::shared_ptr<const LossModel>;

/// Finite-difference step used for Hessians: 1e-5 * max(1, |x|_inf).
double fd_hessian_step(const Vector& x);

/// f(x) = x^T H x / 2.
class QuadraticModel final : public LossModel {
 public:
  explicit QuadraticModel(SymMatrix h);

  Index dim() const override { return h_.dim(); }
  std::string name() const override { return "quadratic"; }
  double value(const Vector& x) const override;
  void gradient(const Vector& x, Vector& out) const override;
  void hessian(const Vector& x, Matrix& out) const override;
  void hessian_vector(const Vector& x, const Vector& v, Vector& out) const override;
  HessianKind hessian_kind() const override { return HessianKind::analytic; }
  double trace_hessian(const Vector& x) const override;
  void gradient_trace_hessian(const Vector& x, Vector& out) const override;

  const SymMatrix& h() const noexcept { return h_; }

 private:
  SymMatrix h_;
};

/// L(x) = x^T H x / 2 + lambda * sum_i x_i^4; a saddle at the origin with
/// minima away from it when H is indefinite.
class EmbeddedSaddleModel final : public LossModel {
 public:
  EmbeddedSaddleModel(SymMatrix h, double lambda);

  Index dim() const override { return h_.dim(); }
  std::string name() const override { return "embedded-saddle"; }
  double value(const Vector& x) const override;
  void gradient(const Vector& x, Vector& out) const override;
  void hessian(const Vector& x, Matrix& out) const override;
  void hessian_vector(const Vector& x, const Vector& v, Vector& out) const override;
  HessianKind hessian_kind() const override { return HessianKind::analytic; }
  double trace_hessian(const Vector& x) const override;
  void gradient_trace_hessian(const Vector& x, Vector& out) const override;

  const SymMatrix& h() const noexcept { return h_; }
  double lambda() const noexcept { return lambda_; }

 private:
  SymMatrix h_;
  double lambda_;
};

/// |W2 W1 - I_d|_F^2 over x = vec(W1) ++ vec(W2), column-major, dim 2 d^2.
/// The origin is a saddle with loss d.
class LinearAutoencoderModel final : public LossModel {
 public:
  explicit LinearAutoencoderModel(Index d);

  Index dim() const override { return 2 * d_ * d_; }
  std::string name() const override { return "linear-autoencoder"; }
  double value(const Vector& x) const override;
  void gradient(const Vector& x, Vector& out) const override;

  Index width() const noexcept { return d_; }

 private:
  Index d_;
};

LossModelPtr quadratic_model(SymMatrix h);
LossModelPtr embedded_saddle_model(SymMatrix h, double lambda);
LossModelPtr linear_autoencoder_model(Index d);

class RngStream;

/// Random SPD matrix A A^T / (2d) with A a d x 2d standard Gaussian matrix.
SymMatrix random_spd_hessian(Index d, RngStream& rng);

/// Diagonal matrix with entries uniform in [lo, hi), sorted descending, and the
/// sign of the smallest `flipped` entries reversed.
SymMatrix random_diagonal_hessian(Index d, double lo, double hi, Index flipped, RngStream& rng);

}  // namespace samsde
