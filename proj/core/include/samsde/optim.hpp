// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/oracle.hpp"

#include <string_view>

namespace samsde {

class RngStream;

enum class Variant { sgd, sam, usam, dnsam, pgd, psam, pusam, pdnsam, rsam };

/// Accepts lower-case names ("sgd", "sam", ..., "rsam"); also "gd" for pgd.
Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);
/// The perturbed-gradient variants (pgd, psam, pusam, pdnsam).
bool is_perturbed(Variant v);

struct OptimizerSpec {
  Variant variant = Variant::sgd;
  double eta = 0.01;
  double rho = 0.0;
  double eps_floor = 1e-12;
  Index rsam_samples = 8;
  double rsam_sigma = 0.0;

  void validate() const;
};

/// Scratch buffers reused across steps so the hot loop does not allocate.
struct StepWorkspace {
  NoiseDraw draw;
  Vector g;
  Vector y;
  Vector g2;
  Vector acc;
  void resize(Index d);
};

/// One update of `x` in place.
///
///   sgd / pgd      x - eta g
///   sam / psam     x - eta grad f_gamma(x + rho g / max(|g|, eps))
///   usam / pusam   x - eta grad f_gamma(x + rho g)
///   dnsam / pdnsam x - eta grad f_gamma(x + rho g / max(|grad f(x)|, eps))
///   rsam           x - eta mean_s grad f_gamma(x + e_s),  e_s ~ N(0, sigma^2 I)
///
/// g = grad f_gamma(x) and a single draw gamma is shared by every gradient
/// evaluation within the step. The perturbed variants are defined as full
/// gradient plus injected Z, so they require an additive Gaussian oracle.
void step_inplace(const OptimizerSpec& spec, const LossModel& model, const GradOracle& oracle,
                  Vector& x, RngStream& rng, StepWorkspace& ws);

Vector step(const OptimizerSpec& spec, const LossModel& model, const GradOracle& oracle,
            const Vector& x, RngStream& rng);

}  // namespace samsde
