// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/runner/config.hpp"
#include "samsde/runner/output.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace samsde::runner {

/// What an experiment body sees: resolved params plus the top-level knobs.
struct RunContext {
  const Json& params;
  std::uint64_t seed;
  Index threads;

  /// Base seed for the `index`-th stream family tagged `tag`. Distinct tags
  /// give unrelated families.
  std::uint64_t derive(std::string_view tag, std::uint64_t index = 0) const;
};

struct ExperimentKind {
  std::string name;
  std::string figure;
  std::string description;
  std::vector<ParamSpec> params;
  std::function<Output(const RunContext&)> run;
};

const std::vector<ExperimentKind>& registry();
/// Throws ConfigError("experiment", ...) for an unknown name.
const ExperimentKind& find_experiment(const std::string& name);

/// Resolves all params (ConfigError on bad input) and returns the
/// fully explicit config.
ExperimentConfig resolve(const ExperimentConfig& cfg);

/// Runs a resolved config.
Output run_experiment(const ExperimentConfig& resolved);

/// The `list` table: one line per registered kind.
std::string list_table();

// Individual experiment definitions, one per registry entry.
ExperimentKind validate_sde_kind();
ExperimentKind interplay_hessian_kind();
ExperimentKind interplay_rho_kind();
ExperimentKind stationary_ball_kind();
ExperimentKind saddle_escape_2d_kind();
ExperimentKind saddle_escape_highdim_kind();
ExperimentKind autoencoder_saddle_kind();
ExperimentKind embedded_saddle_kind();
ExperimentKind suboptimality_kind();

}  // namespace samsde::runner
