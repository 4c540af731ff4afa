// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/sde.hpp"

#include "samsde/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace samsde {

namespace {

struct SdeName {
  SdeVariant v;
  std::string_view name;
};

constexpr std::array<SdeName, 7> kSdeNames = {{
    {SdeVariant::sgd, "sgd"},
    {SdeVariant::usam_general, "usam-general"},
    {SdeVariant::usam_simplified, "usam"},
    {SdeVariant::dnsam, "dnsam"},
    {SdeVariant::sam_general, "sam-general"},
    {SdeVariant::sam_simplified, "sam"},
    {SdeVariant::rsam_drift, "rsam"},
}};

}  // namespace

SdeVariant parse_sde_variant(std::string_view name) {
  if (name == "usam-simplified") return SdeVariant::usam_simplified;
  if (name == "sam-simplified") return SdeVariant::sam_simplified;
  if (name == "rsam-drift") return SdeVariant::rsam_drift;
  for (const auto& e : kSdeNames) {
    if (e.name == name) return e.v;
  }
  throw PreconditionError("unknown SDE variant '" + std::string(name) + "'");
}

std::string_view to_string(SdeVariant v) {
  for (const auto& e : kSdeNames) {
    if (e.v == v) return e.name;
  }
  return "?";
}

bool needs_additive_noise(SdeVariant v) {
  return v == SdeVariant::usam_simplified || v == SdeVariant::dnsam ||
         v == SdeVariant::sam_simplified;
}

void SdeConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw PreconditionError("sde: eta must be > 0");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw PreconditionError("sde: rho must be >= 0");
  if (mc_samples < 1) throw PreconditionError("sde: mc_samples must be >= 1");
  if (!(clamp_tol >= 0.0)) throw PreconditionError("sde: clamp_tol must be >= 0");
  if (!(eps_floor > 0.0)) throw PreconditionError("sde: eps_floor must be > 0");
  if (substeps < 1) throw PreconditionError("sde: substeps must be >= 1");
  if (!(rsam_sigma >= 0.0)) throw PreconditionError("sde: rsam_sigma must be >= 0");
}

void SdeWorkspace::resize(Index d, Index samples) {
  if (g.size() != d) {
    g.resize(d);
    hg.resize(d);
    v.resize(d);
    w.resize(d);
    a_mean.resize(d);
    b_mean.resize(d);
    tmp.resize(d);
    h.resize(d, d);
  }
  if (a.rows() != d || a.cols() != samples) {
    a.resize(d, samples);
    b.resize(d, samples);
  }
}

SdeSystem::SdeSystem(SdeVariant variant, LossModelPtr model, GradOracle oracle, SdeConfig cfg)
    : variant_(variant), model_(std::move(model)), oracle_(std::move(oracle)), cfg_(cfg) {
  if (!model_) throw PreconditionError("build_sde: model is null");
  cfg_.validate();
  oracle_.check(*model_);
  if (needs_additive_noise(variant_) && !oracle_.is_additive()) {
    throw PreconditionError(std::string(to_string(variant_)) +
                            " SDE assumes constant additive gradient noise");
  }
  const Index d = model_->dim();
  if (oracle_.is_additive()) {
    noise_sqrt_ = oracle_.sgd_covariance_sqrt(*model_, Vector::Zero(d));
    isotropic_ = oracle_.cov_sqrt_matrix() == nullptr;
    // Constant zero noise makes every covariance term vanish: the cross
    // covariances are taken between deterministic quantities.
    if (noise_sqrt_.isZero(0.0)) has_diffusion_ = false;
  }
  if (variant_ == SdeVariant::rsam_drift) has_diffusion_ = false;
}

bool SdeSystem::factored() const {
  if (!oracle_.is_additive()) return false;
  switch (variant_) {
    case SdeVariant::sgd:
    case SdeVariant::usam_simplified:
    case SdeVariant::dnsam:
      return true;
    default:
      return cfg_.rho == 0.0;
  }
}

double SdeSystem::curvature_factor(const Vector& grad) const {
  if (variant_ == SdeVariant::dnsam) return cfg_.rho / std::max(grad.norm(), cfg_.eps_floor);
  if (variant_ == SdeVariant::usam_simplified) return cfg_.rho;
  return 0.0;
}

void SdeSystem::mc_pairs(const Vector& x, RngStream& rng, SdeWorkspace& ws) const {
  const Index s_count = cfg_.mc_samples;
  const LossModel& m = *model_;
  const bool additive = oracle_.is_additive();
  if (additive) m.gradient(x, ws.tmp);
  for (Index s = 0; s < s_count; ++s) {
    oracle_.draw(m, rng, ws.draw);
    if (additive) {
      ws.g = ws.tmp + ws.draw.z;
    } else {
      oracle_.gradient(m, x, ws.draw, ws.g);
    }
    ws.a.col(s) = ws.g;
    const double inv_norm = 1.0 / std::max(ws.g.norm(), cfg_.eps_floor);
    switch (variant_) {
      case SdeVariant::usam_general:
        oracle_.hessian_vector(m, x, ws.draw, ws.g, ws.hg);
        ws.b.col(s) = ws.hg;
        break;
      case SdeVariant::sam_general:
        oracle_.hessian_vector(m, x, ws.draw, ws.g, ws.hg);
        ws.b.col(s) = inv_norm * ws.hg;
        break;
      case SdeVariant::sam_simplified:
        ws.b.col(s) = inv_norm * ws.g;
        break;
      default:
        break;
    }
  }
  ws.a_mean = ws.a.rowwise().mean();
  ws.b_mean = ws.b.rowwise().mean();
}

Matrix SdeSystem::mc_cross_covariance(SdeWorkspace& ws) const {
  const Index s_count = cfg_.mc_samples;
  if (s_count < 2) return Matrix::Zero(ws.a.rows(), ws.a.rows());
  ws.a.colwise() -= ws.a_mean;
  ws.b.colwise() -= ws.b_mean;
  return ws.a * ws.b.transpose() / static_cast<double>(s_count - 1);
}

void SdeSystem::drift(const Vector& x, RngStream& rng, Vector& out, SdeWorkspace& ws) const {
  const LossModel& m = *model_;
  ws.resize(m.dim(), cfg_.mc_samples);
  m.gradient(x, ws.g);
  const double rho = cfg_.rho;
  switch (variant_) {
    case SdeVariant::sgd:
      out = -ws.g;
      return;
    case SdeVariant::usam_simplified:
    case SdeVariant::dnsam: {
      const double c = curvature_factor(ws.g);
      m.hessian_vector(x, ws.g, ws.hg);
      out = -(ws.g + c * ws.hg);
      return;
    }
    case SdeVariant::rsam_drift: {
      const double s2 = cfg_.rsam_sigma * cfg_.rsam_sigma;
      if (s2 == 0.0) {
        out = -ws.g;
        return;
      }
      m.gradient_trace_hessian(x, ws.hg);
      out = -(ws.g + 0.5 * s2 * ws.hg);
      return;
    }
    case SdeVariant::usam_general:
    case SdeVariant::sam_general:
    case SdeVariant::sam_simplified:
      break;
  }
  if (rho == 0.0) {
    out = -ws.g;
    return;
  }
  const Vector full_grad = ws.g;
  mc_pairs(x, rng, ws);
  if (variant_ == SdeVariant::sam_simplified) {
    m.hessian_vector(x, ws.b_mean, ws.hg);
    out = -(full_grad + rho * ws.hg);
  } else {
    out = -(full_grad + rho * ws.b_mean);
  }
}

Vector SdeSystem::drift(const Vector& x, RngStream& rng) const {
  SdeWorkspace ws;
  Vector out(dim());
  drift(x, rng, out, ws);
  return out;
}

Matrix SdeSystem::diffusion_covariance(const Vector& x, RngStream& rng, SdeWorkspace& ws) const {
  const LossModel& m = *model_;
  const Index d = m.dim();
  ws.resize(d, cfg_.mc_samples);
  if (variant_ == SdeVariant::rsam_drift) return Matrix::Zero(d, d);
  const double eta = cfg_.eta;
  const double rho = cfg_.rho;

  if (variant_ == SdeVariant::usam_simplified || variant_ == SdeVariant::dnsam) {
    m.gradient(x, ws.g);
    const double c = curvature_factor(ws.g);
    m.hessian(x, ws.h);
    Matrix amp = c * ws.h;
    amp.diagonal().array() += 1.0;
    const Matrix root = amp * noise_sqrt_;
    return eta * root * root.transpose();
  }

  Matrix sigma = oracle_.sgd_covariance(m, x).matrix();
  if (variant_ == SdeVariant::sgd || rho == 0.0) return eta * sigma;

  mc_pairs(x, rng, ws);
  const Matrix cross = mc_cross_covariance(ws);
  Matrix s_hat;
  if (variant_ == SdeVariant::sam_simplified) {
    m.hessian(x, ws.h);
    s_hat = cross * ws.h;
  } else {
    s_hat = cross;
  }
  sigma += rho * (s_hat + s_hat.transpose());
  return eta * sigma;
}

Matrix SdeSystem::diffusion_covariance(const Vector& x, RngStream& rng) const {
  SdeWorkspace ws;
  return diffusion_covariance(x, rng, ws);
}

Matrix SdeSystem::diffusion_sqrt(const Vector& x, RngStream& rng) const {
  const LossModel& m = *model_;
  const Index d = m.dim();
  if (factored()) {
    Vector g(d);
    m.gradient(x, g);
    const double c = curvature_factor(g);
    Matrix amp = Matrix::Identity(d, d);
    if (c != 0.0) amp += c * m.hessian(x).matrix();
    return std::sqrt(cfg_.eta) * amp * noise_sqrt_;
  }
  SdeWorkspace ws;
  const Matrix cov = diffusion_covariance(x, rng, ws);
  return psd_sqrt(SymMatrix::symmetric_part(cov), cfg_.clamp_tol).root.matrix();
}

void SdeSystem::noise_increment(const Vector& x, RngStream& rng, Vector& out,
                                SdeWorkspace& ws) const {
  const LossModel& m = *model_;
  const Index d = m.dim();
  ws.resize(d, cfg_.mc_samples);
  if (!has_diffusion_) {
    out.setZero();
    return;
  }
  if (factored()) {
    rng.fill_normal(ws.w);
    if (isotropic_) {
      ws.v = (std::sqrt(cfg_.eta) * oracle_.sigma()) * ws.w;
    } else {
      ws.v.noalias() = std::sqrt(cfg_.eta) * noise_sqrt_ * ws.w;
    }
    double c = 0.0;
    if (variant_ == SdeVariant::usam_simplified || variant_ == SdeVariant::dnsam) {
      if (variant_ == SdeVariant::dnsam) m.gradient(x, ws.g);
      c = curvature_factor(ws.g);
    }
    if (c != 0.0) {
      m.hessian_vector(x, ws.v, ws.hg);
      out = ws.v + c * ws.hg;
    } else {
      out = ws.v;
    }
    return;
  }
  const Matrix cov = diffusion_covariance(x, rng, ws);
  const Matrix root = psd_sqrt(SymMatrix::symmetric_part(cov), cfg_.clamp_tol).root.matrix();
  rng.fill_normal(ws.w);
  out.noalias() = root * ws.w;
}

SdeSystem build_sde(SdeVariant variant, LossModelPtr model, GradOracle oracle, SdeConfig cfg) {
  return SdeSystem(variant, std::move(model), std::move(oracle), cfg);
}

McEstimate mc_expected_grad_norm(const LossModel& model, const GradOracle& oracle,
                                 const Vector& x, Index samples, RngStream& rng) {
  if (samples < 1) throw PreconditionError("mc_expected_grad_norm: samples must be >= 1");
  oracle.check(model);
  NoiseDraw draw;
  Vector g(model.dim());
  double mean = 0.0;
  double m2 = 0.0;
  for (Index s = 0; s < samples; ++s) {
    oracle.draw(model, rng, draw);
    oracle.gradient(model, x, draw, g);
    const double v = g.norm();
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  McEstimate est;
  est.mean = mean;
  if (samples > 1) {
    est.se = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  }
  return est;
}

DivergenceError::DivergenceError(Index step)
    : Error("state became non-finite at step " + std::to_string(step)), step_(step) {}

Index em_run(const SdeSystem& sys, const Vector& x0, Index steps, RngStream& rng,
             const EmObserver& observe) {
  if (steps < 1) throw PreconditionError("em: steps must be >= 1");
  if (x0.size() != sys.dim()) throw PreconditionError("em: x0 has the wrong dimension");
  const SdeConfig& cfg = sys.config();
  const double dt = cfg.eta / static_cast<double>(cfg.substeps);
  const double sqrt_dt = std::sqrt(dt);
  const bool noisy = sys.has_diffusion();

  SdeWorkspace ws;
  Vector x = x0;
  Vector b(x.size());
  Vector n(x.size());
  if (observe && !observe(0, x)) return 0;
  for (Index k = 1; k <= steps; ++k) {
    for (Index sub = 0; sub < cfg.substeps; ++sub) {
      sys.drift(x, rng, b, ws);
      if (noisy) {
        sys.noise_increment(x, rng, n, ws);
        x += dt * b + sqrt_dt * n;
      } else {
        x += dt * b;
      }
    }
    if (!x.allFinite()) throw DivergenceError(k);
    if (observe && !observe(k, x)) return k;
  }
  return steps;
}

std::vector<Vector> em_integrate(const SdeSystem& sys, const Vector& x0, Index steps,
                                 RngStream& rng) {
  std::vector<Vector> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  em_run(sys, x0, steps, rng, [&path](Index, const Vector& x) {
    path.push_back(x);
    return true;
  });
  return path;
}

}  // namespace samsde
