// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/optim.hpp"
#include "samsde/sde.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace samsde {

/// |x| + |grad f(x)|.
double test_g1(const Vector& x, const LossModel& model);
/// f(x).
double test_g2(const Vector& x, const LossModel& model);

struct TestFunction {
  std::string name;
  std::function<double(const Vector&, const LossModel&)> fn;
};

/// {"g1", test_g1} and {"g2", test_g2}.
std::vector<TestFunction> default_test_functions();

using X0Sampler = std::function<Vector(Index run, RngStream& rng)>;

struct EnsembleSpec {
  Index runs = 1;
  Index steps = 1;
  Vector x0;
  X0Sampler x0_sampler;  // overrides x0 when set
  std::uint64_t base_seed = 0;
  Index threads = 0;  // 0: hardware concurrency
  bool keep_terminal = false;

  void validate(Index dim) const;
};

/// Streaming observer of whole trajectories, aggregated across an ensemble.
///
/// The runner gives each block of consecutive runs its own fresh copy
/// (fresh()), feeds the block's runs to it in run order, then merges the
/// copies in block order. Since blocks depend only on the run count, the
/// result does not depend on the number of threads.
class PathMetric {
 public:
  virtual ~PathMetric() = default;
  virtual std::unique_ptr<PathMetric> fresh() const = 0;
  virtual void begin(Index /*run*/) {}
  virtual void observe(Index k, const Vector& x) = 0;
  /// diverged_at is the step index of a divergence or -1.
  virtual void end(Index /*run*/, Index /*diverged_at*/) {}
  virtual void merge(const PathMetric& other) = 0;
};

struct SeriesStats {
  std::string name;
  std::vector<double> mean;   // per iteration k = 0..steps
  std::vector<double> se;     // sample std / sqrt(count)
  std::vector<Index> count;   // runs still finite at k
};

struct EnsembleStats {
  Index runs = 0;
  Index steps = 0;
  std::vector<SeriesStats> series;
  std::vector<Index> divergence_step;  // per run, -1 when finite throughout
  std::vector<Vector> terminal;        // per run, when keep_terminal

  const SeriesStats& get(const std::string& name) const;
  Index diverged() const;
};

/// One trajectory of a user-defined process: called with the run's stream,
/// the starting point, and an observer; returns -1 or the divergence step.
using TrajectoryFn =
    std::function<Index(RngStream& rng, const Vector& x0, const EmObserver& observe)>;

/// Generic ensemble driver used by the two runners below.
EnsembleStats run_ensemble(const TrajectoryFn& trajectory, const LossModel& model,
                           const EnsembleSpec& ens, const std::vector<TestFunction>& tests,
                           const std::vector<PathMetric*>& metrics = {});

EnsembleStats run_discrete_ensemble(const OptimizerSpec& spec, const LossModel& model,
                                    const GradOracle& oracle, const EnsembleSpec& ens,
                                    const std::vector<TestFunction>& tests,
                                    const std::vector<PathMetric*>& metrics = {});

EnsembleStats run_sde_ensemble(const SdeSystem& sys, const EnsembleSpec& ens,
                               const std::vector<TestFunction>& tests,
                               const std::vector<PathMetric*>& metrics = {});

struct WeakError {
  double value = 0.0;  // max_k |mean_a(k) - mean_b(k)|
  Index iteration = 0;
  double se = 0.0;  // sqrt(se_a^2 + se_b^2) at that iteration
};

/// Throws PreconditionError when the series lengths differ.
WeakError weak_error(const EnsembleStats& a, const EnsembleStats& b, const std::string& name);

/// Stream for run `run` of an ensemble seeded with `base_seed`.
RngStream ensemble_stream(std::uint64_t base_seed, Index run);

}  // namespace samsde
