// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/oracle.hpp"

#include "samsde/rng.hpp"

#include <cmath>

namespace samsde {

GradOracle GradOracle::additive_gaussian(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw PreconditionError("additive_gaussian: sigma must be finite and >= 0");
  }
  GradOracle o;
  o.kind_ = OracleKind::additive_gaussian;
  o.sigma_ = sigma;
  return o;
}

GradOracle GradOracle::additive_gaussian_cov_sqrt(Matrix cov_sqrt) {
  if (cov_sqrt.rows() != cov_sqrt.cols() || !cov_sqrt.allFinite()) {
    throw PreconditionError("additive_gaussian: cov_sqrt must be a finite square matrix");
  }
  GradOracle o;
  o.kind_ = OracleKind::additive_gaussian;
  o.sigma_ = std::nan("");
  o.cov_sqrt_ = std::move(cov_sqrt);
  return o;
}

GradOracle GradOracle::minibatch(Index batch_size) {
  if (batch_size < 1) throw PreconditionError("minibatch: batch size must be >= 1");
  GradOracle o;
  o.kind_ = OracleKind::minibatch;
  o.batch_ = batch_size;
  return o;
}

void GradOracle::check(const LossModel& model) const {
  if (is_additive()) {
    if (cov_sqrt_ && cov_sqrt_->rows() != model.dim()) {
      throw PreconditionError("additive_gaussian: cov_sqrt dimension does not match model");
    }
    return;
  }
  const Index n = model.num_examples();
  if (n == 0) throw PreconditionError(model.name() + ": minibatch oracle needs a finite-sum model");
  if (batch_ > n) throw PreconditionError("minibatch: batch size exceeds dataset size");
}

void GradOracle::draw(const LossModel& model, RngStream& rng, NoiseDraw& out) const {
  if (is_additive()) {
    const Index d = model.dim();
    out.z.resize(d);
    rng.fill_normal(out.z);
    if (cov_sqrt_) {
      out.z = (*cov_sqrt_ * out.z).eval();
    } else {
      out.z *= sigma_;
    }
    return;
  }
  const auto n = static_cast<std::uint64_t>(model.num_examples());
  out.batch.resize(static_cast<std::size_t>(batch_));
  for (auto& i : out.batch) i = static_cast<Index>(rng.uniform_index(n));
}

NoiseDraw GradOracle::draw(const LossModel& model, RngStream& rng) const {
  NoiseDraw d;
  draw(model, rng, d);
  return d;
}

void GradOracle::gradient(const LossModel& model, const Vector& x, const NoiseDraw& d,
                          Vector& out) const {
  if (is_additive()) {
    model.gradient(x, out);
    out += d.z;
  } else {
    model.batch_gradient(x, d.batch, out);
  }
}

void GradOracle::hessian(const LossModel& model, const Vector& x, const NoiseDraw& d,
                         Matrix& out) const {
  if (is_additive()) {
    model.hessian(x, out);
  } else {
    model.batch_hessian(x, d.batch, out);
  }
}

void GradOracle::hessian_vector(const LossModel& model, const Vector& x, const NoiseDraw& d,
                                const Vector& v, Vector& out) const {
  if (is_additive()) {
    model.hessian_vector(x, v, out);
  } else {
    model.batch_hessian_vector(x, d.batch, v, out);
  }
}

SymMatrix GradOracle::sgd_covariance(const LossModel& model, const Vector& x) const {
  const Index dim = model.dim();
  if (is_additive()) {
    if (cov_sqrt_) return SymMatrix::symmetric_part(*cov_sqrt_ * cov_sqrt_->transpose());
    return SymMatrix::identity(dim).scaled(sigma_ * sigma_);
  }
  check(model);
  const Index n = model.num_examples();
  Matrix grads(dim, n);
  Vector g(dim);
  Index single[1];
  for (Index i = 0; i < n; ++i) {
    single[0] = i;
    model.batch_gradient(x, single, g);
    grads.col(i) = g;
  }
  const Vector mean = grads.rowwise().mean();
  grads.colwise() -= mean;
  const Matrix cov =
      grads * grads.transpose() / (static_cast<double>(n) * static_cast<double>(batch_));
  return SymMatrix::symmetric_part(cov);
}

Matrix GradOracle::sgd_covariance_sqrt(const LossModel& model, const Vector& x,
                                       double clamp_tol) const {
  if (is_additive()) {
    if (cov_sqrt_) return *cov_sqrt_;
    return sigma_ * Matrix::Identity(model.dim(), model.dim());
  }
  return psd_sqrt(sgd_covariance(model, x), clamp_tol).root.matrix();
}

Vector oracle_sample(const LossModel& model, const GradOracle& oracle, const Vector& x,
                     RngStream& rng) {
  oracle.check(model);
  const NoiseDraw d = oracle.draw(model, rng);
  Vector g(model.dim());
  oracle.gradient(model, x, d, g);
  return g;
}

}  // namespace samsde
