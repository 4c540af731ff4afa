// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/harness.hpp"

#include "samsde/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace samsde {

double test_g1(const Vector& x, const LossModel& model) {
  return x.norm() + model.gradient(x).norm();
}

double test_g2(const Vector& x, const LossModel& model) { return model.value(x); }

std::vector<TestFunction> default_test_functions() {
  return {{"g1", test_g1}, {"g2", test_g2}};
}

void EnsembleSpec::validate(Index dim) const {
  if (runs < 1) throw PreconditionError("ensemble: runs must be >= 1");
  if (steps < 1) throw PreconditionError("ensemble: steps must be >= 1");
  if (!x0_sampler && x0.size() != dim) {
    throw PreconditionError("ensemble: x0 has dimension " + std::to_string(x0.size()) +
                            ", model has " + std::to_string(dim));
  }
  if (threads < 0) throw PreconditionError("ensemble: threads must be >= 0");
}

const SeriesStats& EnsembleStats::get(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return s;
  }
  throw PreconditionError("ensemble: no series named '" + name + "'");
}

Index EnsembleStats::diverged() const {
  return static_cast<Index>(
      std::count_if(divergence_step.begin(), divergence_step.end(), [](Index s) { return s >= 0; }));
}

RngStream ensemble_stream(std::uint64_t base_seed, Index run) {
  return RngStream(base_seed, static_cast<std::uint64_t>(run));
}

namespace {

constexpr Index kMaxBlocks = 64;
constexpr std::uint64_t kX0Substream = 0x7830'7361'6d70'6c65ull;

// Welford accumulators for one block of runs, laid out [series][k].
struct BlockAccumulator {
  std::vector<Index> n;
  std::vector<double> mean;
  std::vector<double> m2;

  void init(std::size_t size) {
    n.assign(size, 0);
    mean.assign(size, 0.0);
    m2.assign(size, 0.0);
  }

  void add(std::size_t i, double v) {
    const Index c = ++n[i];
    const double delta = v - mean[i];
    mean[i] += delta / static_cast<double>(c);
    m2[i] += delta * (v - mean[i]);
  }

  // Chan et al. pairwise combination.
  void merge(const BlockAccumulator& o) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      const Index nb = o.n[i];
      if (nb == 0) continue;
      const Index na = n[i];
      if (na == 0) {
        n[i] = nb;
        mean[i] = o.mean[i];
        m2[i] = o.m2[i];
        continue;
      }
      const auto nt = static_cast<double>(na + nb);
      const double delta = o.mean[i] - mean[i];
      mean[i] += delta * static_cast<double>(nb) / nt;
      m2[i] += o.m2[i] + delta * delta * static_cast<double>(na) * static_cast<double>(nb) / nt;
      n[i] = na + nb;
    }
  }
};

struct BlockResult {
  BlockAccumulator acc;
  std::vector<std::unique_ptr<PathMetric>> metrics;
};

}  // namespace

EnsembleStats run_ensemble(const TrajectoryFn& trajectory, const LossModel& model,
                           const EnsembleSpec& ens, const std::vector<TestFunction>& tests,
                           const std::vector<PathMetric*>& metrics) {
  ens.validate(model.dim());
  const Index runs = ens.runs;
  const Index steps = ens.steps;
  const auto width = static_cast<std::size_t>(steps + 1);
  const std::size_t n_tests = tests.size();

  const Index block_size = (runs + kMaxBlocks - 1) / kMaxBlocks;
  const Index n_blocks = (runs + block_size - 1) / block_size;

  EnsembleStats stats;
  stats.runs = runs;
  stats.steps = steps;
  stats.divergence_step.assign(static_cast<std::size_t>(runs), -1);
  if (ens.keep_terminal) stats.terminal.resize(static_cast<std::size_t>(runs));

  std::vector<BlockResult> blocks(static_cast<std::size_t>(n_blocks));

  auto run_block = [&](Index b) {
    BlockResult& br = blocks[static_cast<std::size_t>(b)];
    br.acc.init(n_tests * width);
    for (PathMetric* m : metrics) br.metrics.push_back(m->fresh());

    const Index first = b * block_size;
    const Index last = std::min(runs, first + block_size);
    for (Index r = first; r < last; ++r) {
      RngStream rng = ensemble_stream(ens.base_seed, r);
      Vector x0 = ens.x0;
      if (ens.x0_sampler) {
        RngStream x0_rng = rng.substream(kX0Substream);
        x0 = ens.x0_sampler(r, x0_rng);
        if (x0.size() != model.dim()) throw PreconditionError("ensemble: sampled x0 dimension");
      }
      for (auto& m : br.metrics) m->begin(r);
      Vector* terminal = ens.keep_terminal ? &stats.terminal[static_cast<std::size_t>(r)] : nullptr;
      const EmObserver observe = [&](Index k, const Vector& x) {
        for (std::size_t t = 0; t < n_tests; ++t) {
          br.acc.add(t * width + static_cast<std::size_t>(k), tests[t].fn(x, model));
        }
        for (auto& m : br.metrics) m->observe(k, x);
        if (terminal != nullptr) *terminal = x;
        return true;
      };
      const Index div = trajectory(rng, x0, observe);
      stats.divergence_step[static_cast<std::size_t>(r)] = div;
      for (auto& m : br.metrics) m->end(r, div);
    }
  };

  Index threads = ens.threads > 0 ? ens.threads
                                  : static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n_blocks);
  if (threads <= 1) {
    for (Index b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (Index t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (Index b = next++; b < n_blocks; b = next++) {
          try {
            run_block(b);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  BlockAccumulator total;
  total.init(n_tests * width);
  for (Index b = 0; b < n_blocks; ++b) {
    const BlockResult& br = blocks[static_cast<std::size_t>(b)];
    total.merge(br.acc);
    for (std::size_t m = 0; m < metrics.size(); ++m) metrics[m]->merge(*br.metrics[m]);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t t = 0; t < n_tests; ++t) {
    SeriesStats s;
    s.name = tests[t].name;
    s.mean.resize(width);
    s.se.resize(width);
    s.count.resize(width);
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t i = t * width + k;
      const Index n = total.n[i];
      s.count[k] = n;
      if (n == 0) {
        s.mean[k] = nan;
        s.se[k] = nan;
      } else {
        s.mean[k] = total.mean[i];
        s.se[k] = n > 1 ? std::sqrt(total.m2[i] / static_cast<double>(n - 1) / static_cast<double>(n))
                        : 0.0;
      }
    }
    stats.series.push_back(std::move(s));
  }
  return stats;
}

EnsembleStats run_discrete_ensemble(const OptimizerSpec& spec, const LossModel& model,
                                    const GradOracle& oracle, const EnsembleSpec& ens,
                                    const std::vector<TestFunction>& tests,
                                    const std::vector<PathMetric*>& metrics) {
  spec.validate();
  oracle.check(model);
  const Index steps = ens.steps;
  const TrajectoryFn traj = [&](RngStream& rng, const Vector& x0, const EmObserver& observe) {
    Vector x = x0;
    StepWorkspace ws;
    if (!observe(0, x)) return Index{-1};
    for (Index k = 1; k <= steps; ++k) {
      step_inplace(spec, model, oracle, x, rng, ws);
      if (!x.allFinite()) return k;
      if (!observe(k, x)) break;
    }
    return Index{-1};
  };
  return run_ensemble(traj, model, ens, tests, metrics);
}

EnsembleStats run_sde_ensemble(const SdeSystem& sys, const EnsembleSpec& ens,
                               const std::vector<TestFunction>& tests,
                               const std::vector<PathMetric*>& metrics) {
  const Index steps = ens.steps;
  const TrajectoryFn traj = [&](RngStream& rng, const Vector& x0, const EmObserver& observe) {
    try {
      em_run(sys, x0, steps, rng, observe);
    } catch (const DivergenceError& e) {
      return e.step();
    }
    return Index{-1};
  };
  return run_ensemble(traj, sys.model(), ens, tests, metrics);
}

WeakError weak_error(const EnsembleStats& a, const EnsembleStats& b, const std::string& name) {
  const SeriesStats& sa = a.get(name);
  const SeriesStats& sb = b.get(name);
  if (sa.mean.size() != sb.mean.size()) {
    throw PreconditionError("weak_error: series lengths differ");
  }
  WeakError out;
  for (std::size_t k = 0; k < sa.mean.size(); ++k) {
    const double diff = std::abs(sa.mean[k] - sb.mean[k]);
    if (std::isnan(diff)) continue;
    if (diff > out.value || k == 0) {
      out.value = diff;
      out.iteration = static_cast<Index>(k);
      out.se = std::hypot(sa.se[k], sb.se[k]);
    }
  }
  return out;
}

}  // namespace samsde
