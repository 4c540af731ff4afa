// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/models.hpp"

#include "samsde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace samsde {

namespace {

using GradFn = std::function<void(const Vector&, Vector&)>;

void fd_hessian(const GradFn& grad, const Vector& x, Matrix& out) {
  const Index d = x.size();
  const double h = fd_hessian_step(x);
  Vector xp = x;
  Vector gp(d), gm(d);
  for (Index j = 0; j < d; ++j) {
    xp[j] = x[j] + h;
    grad(xp, gp);
    xp[j] = x[j] - h;
    grad(xp, gm);
    xp[j] = x[j];
    out.col(j) = (gp - gm) / (2.0 * h);
  }
  out = 0.5 * (out + out.transpose()).eval();
}

void fd_hessian_vector(const GradFn& grad, const Vector& x, const Vector& v, Vector& out) {
  const double vnorm = v.norm();
  if (vnorm == 0.0) {
    out.setZero();
    return;
  }
  const double t = fd_hessian_step(x) / vnorm;
  Vector gp(x.size()), gm(x.size());
  grad(x + t * v, gp);
  grad(x - t * v, gm);
  out = (gp - gm) / (2.0 * t);
}

void require_finite_sum(const LossModel& m) {
  if (m.num_examples() == 0) {
    throw PreconditionError(m.name() + ": model has no finite-sum structure");
  }
}

}  // namespace

double fd_hessian_step(const Vector& x) {
  const double scale = x.size() == 0 ? 1.0 : std::max(1.0, x.cwiseAbs().maxCoeff());
  return 1e-5 * scale;
}

void LossModel::hessian(const Vector& x, Matrix& out) const {
  fd_hessian([this](const Vector& p, Vector& g) { gradient(p, g); }, x, out);
}

void LossModel::hessian_vector(const Vector& x, const Vector& v, Vector& out) const {
  fd_hessian_vector([this](const Vector& p, Vector& g) { gradient(p, g); }, x, v, out);
}

double LossModel::trace_hessian(const Vector& x) const {
  Matrix h(dim(), dim());
  hessian(x, h);
  return h.trace();
}

void LossModel::gradient_trace_hessian(const Vector& x, Vector& out) const {
  const double step = 1e-3 * (x.size() == 0 ? 1.0 : std::max(1.0, x.cwiseAbs().maxCoeff()));
  Vector xp = x;
  for (Index j = 0; j < x.size(); ++j) {
    xp[j] = x[j] + step;
    const double tp = trace_hessian(xp);
    xp[j] = x[j] - step;
    const double tm = trace_hessian(xp);
    xp[j] = x[j];
    out[j] = (tp - tm) / (2.0 * step);
  }
}

double LossModel::batch_value(const Vector&, std::span<const Index>) const {
  require_finite_sum(*this);
  throw Error(name() + ": batch_value not implemented");
}

void LossModel::batch_gradient(const Vector&, std::span<const Index>, Vector&) const {
  require_finite_sum(*this);
  throw Error(name() + ": batch_gradient not implemented");
}

void LossModel::batch_hessian(const Vector& x, std::span<const Index> batch, Matrix& out) const {
  require_finite_sum(*this);
  fd_hessian([this, batch](const Vector& p, Vector& g) { batch_gradient(p, batch, g); }, x, out);
}

void LossModel::batch_hessian_vector(const Vector& x, std::span<const Index> batch,
                                     const Vector& v, Vector& out) const {
  require_finite_sum(*this);
  fd_hessian_vector([this, batch](const Vector& p, Vector& g) { batch_gradient(p, batch, g); },
                    x, v, out);
}

Vector LossModel::gradient(const Vector& x) const {
  Vector g(dim());
  gradient(x, g);
  return g;
}

SymMatrix LossModel::hessian(const Vector& x) const {
  Matrix h(dim(), dim());
  hessian(x, h);
  return SymMatrix::symmetric_part(h);
}

Vector LossModel::hessian_vector(const Vector& x, const Vector& v) const {
  Vector out(dim());
  hessian_vector(x, v, out);
  return out;
}

// --- quadratic ---------------------------------------------------------------

QuadraticModel::QuadraticModel(SymMatrix h) : h_(std::move(h)) {}

double QuadraticModel::value(const Vector& x) const { return 0.5 * x.dot(h_.matrix() * x); }

void QuadraticModel::gradient(const Vector& x, Vector& out) const {
  out.noalias() = h_.matrix() * x;
}

void QuadraticModel::hessian(const Vector&, Matrix& out) const { out = h_.matrix(); }

void QuadraticModel::hessian_vector(const Vector&, const Vector& v, Vector& out) const {
  out.noalias() = h_.matrix() * v;
}

double QuadraticModel::trace_hessian(const Vector&) const { return h_.matrix().trace(); }

void QuadraticModel::gradient_trace_hessian(const Vector&, Vector& out) const { out.setZero(); }

// --- embedded saddle ---------------------------------------------------------

EmbeddedSaddleModel::EmbeddedSaddleModel(SymMatrix h, double lambda)
    : h_(std::move(h)), lambda_(lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("embedded_saddle_model: lambda must be >= 0");
}

double EmbeddedSaddleModel::value(const Vector& x) const {
  return 0.5 * x.dot(h_.matrix() * x) + lambda_ * x.array().pow(4).sum();
}

void EmbeddedSaddleModel::gradient(const Vector& x, Vector& out) const {
  out.noalias() = h_.matrix() * x;
  out.array() += 4.0 * lambda_ * x.array().cube();
}

void EmbeddedSaddleModel::hessian(const Vector& x, Matrix& out) const {
  out = h_.matrix();
  out.diagonal().array() += 12.0 * lambda_ * x.array().square();
}

void EmbeddedSaddleModel::hessian_vector(const Vector& x, const Vector& v, Vector& out) const {
  out.noalias() = h_.matrix() * v;
  out.array() += 12.0 * lambda_ * x.array().square() * v.array();
}

double EmbeddedSaddleModel::trace_hessian(const Vector& x) const {
  return h_.matrix().trace() + 12.0 * lambda_ * x.squaredNorm();
}

void EmbeddedSaddleModel::gradient_trace_hessian(const Vector& x, Vector& out) const {
  out = 24.0 * lambda_ * x;
}

// --- linear autoencoder ------------------------------------------------------

LinearAutoencoderModel::LinearAutoencoderModel(Index d) : d_(d) {
  if (d < 1) throw PreconditionError("linear_autoencoder_model: d must be >= 1");
}

double LinearAutoencoderModel::value(const Vector& x) const {
  const Index n = d_ * d_;
  Eigen::Map<const Matrix> w1(x.data(), d_, d_);
  Eigen::Map<const Matrix> w2(x.data() + n, d_, d_);
  Matrix r = w2 * w1;
  r.diagonal().array() -= 1.0;
  return r.squaredNorm();
}

void LinearAutoencoderModel::gradient(const Vector& x, Vector& out) const {
  const Index n = d_ * d_;
  Eigen::Map<const Matrix> w1(x.data(), d_, d_);
  Eigen::Map<const Matrix> w2(x.data() + n, d_, d_);
  Matrix r = w2 * w1;
  r.diagonal().array() -= 1.0;
  Eigen::Map<Matrix> g1(out.data(), d_, d_);
  Eigen::Map<Matrix> g2(out.data() + n, d_, d_);
  g1.noalias() = 2.0 * w2.transpose() * r;
  g2.noalias() = 2.0 * r * w1.transpose();
}

// --- factories ---------------------------------------------------------------

LossModelPtr quadratic_model(SymMatrix h) { return std::make_shared<QuadraticModel>(std::move(h)); }

LossModelPtr embedded_saddle_model(SymMatrix h, double lambda) {
  return std::make_shared<EmbeddedSaddleModel>(std::move(h), lambda);
}

LossModelPtr linear_autoencoder_model(Index d) {
  return std::make_shared<LinearAutoencoderModel>(d);
}

SymMatrix random_spd_hessian(Index d, RngStream& rng) {
  Matrix a(d, 2 * d);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < d; ++i) a(i, j) = rng.normal();
  }
  return SymMatrix::symmetric_part(a * a.transpose() / (2.0 * static_cast<double>(d)));
}

SymMatrix random_diagonal_hessian(Index d, double lo, double hi, Index flipped, RngStream& rng) {
  if (!(hi > lo) || !(lo > 0.0)) {
    throw PreconditionError("random_diagonal_hessian: need 0 < lo < hi");
  }
  if (flipped < 0 || flipped > d) {
    throw PreconditionError("random_diagonal_hessian: flipped out of range");
  }
  Vector diag(d);
  for (Index i = 0; i < d; ++i) diag[i] = lo + (hi - lo) * rng.uniform();
  std::sort(diag.begin(), diag.end(), std::greater<>());
  for (Index i = d - flipped; i < d; ++i) diag[i] = -diag[i];
  return SymMatrix::diagonal(diag);
}

}  // namespace samsde
