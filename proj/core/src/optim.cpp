// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/optim.hpp"

#include "samsde/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace samsde {

namespace {

struct VariantName {
  Variant v;
  std::string_view name;
};

constexpr std::array<VariantName, 9> kVariantNames = {{
    {Variant::sgd, "sgd"},
    {Variant::sam, "sam"},
    {Variant::usam, "usam"},
    {Variant::dnsam, "dnsam"},
    {Variant::pgd, "pgd"},
    {Variant::psam, "psam"},
    {Variant::pusam, "pusam"},
    {Variant::pdnsam, "pdnsam"},
    {Variant::rsam, "rsam"},
}};

}  // namespace

Variant parse_variant(std::string_view name) {
  if (name == "gd") return Variant::pgd;
  for (const auto& e : kVariantNames) {
    if (e.name == name) return e.v;
  }
  throw PreconditionError("unknown optimizer variant '" + std::string(name) + "'");
}

std::string_view to_string(Variant v) {
  for (const auto& e : kVariantNames) {
    if (e.v == v) return e.name;
  }
  return "?";
}

bool is_perturbed(Variant v) {
  return v == Variant::pgd || v == Variant::psam || v == Variant::pusam || v == Variant::pdnsam;
}

void OptimizerSpec::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw PreconditionError("optimizer: eta must be > 0");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw PreconditionError("optimizer: rho must be >= 0");
  if (!(eps_floor > 0.0)) throw PreconditionError("optimizer: eps_floor must be > 0");
  if (rsam_samples < 1) throw PreconditionError("optimizer: rsam_samples must be >= 1");
  if (!(rsam_sigma >= 0.0)) throw PreconditionError("optimizer: rsam_sigma must be >= 0");
}

void StepWorkspace::resize(Index d) {
  if (g.size() == d) return;
  g.resize(d);
  y.resize(d);
  g2.resize(d);
  acc.resize(d);
}

void step_inplace(const OptimizerSpec& spec, const LossModel& model, const GradOracle& oracle,
                  Vector& x, RngStream& rng, StepWorkspace& ws) {
  if (is_perturbed(spec.variant) && !oracle.is_additive()) {
    throw PreconditionError(std::string(to_string(spec.variant)) +
                            ": perturbed variants inject additive Gaussian noise");
  }
  ws.resize(model.dim());
  oracle.draw(model, rng, ws.draw);

  switch (spec.variant) {
    case Variant::sgd:
    case Variant::pgd:
      oracle.gradient(model, x, ws.draw, ws.g);
      x.noalias() -= spec.eta * ws.g;
      return;

    case Variant::sam:
    case Variant::psam: {
      oracle.gradient(model, x, ws.draw, ws.g);
      const double scale = spec.rho / std::max(ws.g.norm(), spec.eps_floor);
      ws.y = x + scale * ws.g;
      break;
    }

    case Variant::usam:
    case Variant::pusam:
      oracle.gradient(model, x, ws.draw, ws.g);
      ws.y = x + spec.rho * ws.g;
      break;

    case Variant::dnsam:
    case Variant::pdnsam: {
      model.gradient(x, ws.g2);
      const double scale = spec.rho / std::max(ws.g2.norm(), spec.eps_floor);
      oracle.gradient(model, x, ws.draw, ws.g);
      ws.y = x + scale * ws.g;
      break;
    }

    case Variant::rsam: {
      ws.acc.setZero();
      for (Index s = 0; s < spec.rsam_samples; ++s) {
        rng.fill_normal(ws.y);
        ws.y = x + spec.rsam_sigma * ws.y;
        oracle.gradient(model, ws.y, ws.draw, ws.g);
        ws.acc += ws.g;
      }
      x.noalias() -= (spec.eta / static_cast<double>(spec.rsam_samples)) * ws.acc;
      return;
    }
  }

  oracle.gradient(model, ws.y, ws.draw, ws.g);
  x.noalias() -= spec.eta * ws.g;
}

Vector step(const OptimizerSpec& spec, const LossModel& model, const GradOracle& oracle,
            const Vector& x, RngStream& rng) {
  spec.validate();
  oracle.check(model);
  Vector out = x;
  StepWorkspace ws;
  step_inplace(spec, model, oracle, out, rng, ws);
  return out;
}

}  // namespace samsde
