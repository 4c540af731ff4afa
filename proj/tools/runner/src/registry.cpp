// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/rng.hpp"
#include "samsde/runner/experiments.hpp"

#include <cstdio>

namespace samsde::runner {

std::uint64_t RunContext::derive(std::string_view tag, std::uint64_t index) const {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return mix64(seed ^ mix64(h + mix64(index)));
}

const std::vector<ExperimentKind>& registry() {
  static const std::vector<ExperimentKind> kinds = {
      validate_sde_kind(),          interplay_hessian_kind(),   interplay_rho_kind(),
      stationary_ball_kind(),       saddle_escape_2d_kind(),    saddle_escape_highdim_kind(),
      autoencoder_saddle_kind(),    embedded_saddle_kind(),     suboptimality_kind(),
  };
  return kinds;
}

const ExperimentKind& find_experiment(const std::string& name) {
  for (const auto& k : registry()) {
    if (k.name == name) return k;
  }
  std::string known;
  for (const auto& k : registry()) known += (known.empty() ? "" : ", ") + k.name;
  throw ConfigError("experiment", "unknown kind '" + name + "' (known: " + known + ")");
}

ExperimentConfig resolve(const ExperimentConfig& cfg) {
  const ExperimentKind& kind = find_experiment(cfg.experiment);
  ExperimentConfig r = cfg;
  r.params = resolve_params(cfg.params, kind.params, cfg.paper_scale);
  return r;
}

Output run_experiment(const ExperimentConfig& resolved) {
  const ExperimentKind& kind = find_experiment(resolved.experiment);
  const RunContext ctx{resolved.params, resolved.seed, static_cast<Index>(resolved.threads)};
  return kind.run(ctx);
}

std::string list_table() {
  std::string s;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s  %-12s  %s\n", "experiment", "figure", "description");
  s += line;
  for (const auto& k : registry()) {
    std::snprintf(line, sizeof line, "%-22s  %-12s  %s\n", k.name.c_str(), k.figure.c_str(),
                  k.description.c_str());
    s += line;
  }
  return s;
}

}  // namespace samsde::runner
