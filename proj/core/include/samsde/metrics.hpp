// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/harness.hpp"

#include <cstdint>
#include <vector>

namespace samsde {

/// Per-iteration occupancy of the closed ball |x - centre| <= r.
struct BallOccupancy {
  Index runs = 0;
  std::vector<std::int64_t> inside;   // trajectories inside at iteration k
  std::vector<std::int64_t> entries;  // outside at k-1, inside at k
  std::vector<std::int64_t> exits;    // inside at k-1, outside at k
  std::vector<Index> first_entry;     // per run; -1 if never inside

  std::int64_t jumps(Index k) const { return entries[k] + exits[k]; }
  /// Entries plus exits over [begin, end).
  std::int64_t jumps_between(Index begin, Index end) const;
  /// Mean number of trajectories outside over [begin, end).
  double mean_outside(Index begin, Index end) const;
  Index ever_entered() const;
};

BallOccupancy ball_occupancy(const std::vector<std::vector<Vector>>& paths, double radius,
                             const Vector& centre);

/// Streaming form of ball_occupancy for run_*_ensemble.
class BallOccupancyMetric final : public PathMetric {
 public:
  BallOccupancyMetric(Index runs, Index steps, double radius, Vector centre);

  std::unique_ptr<PathMetric> fresh() const override;
  void begin(Index run) override;
  void observe(Index k, const Vector& x) override;
  void merge(const PathMetric& other) override;

  const BallOccupancy& result() const noexcept { return occ_; }

 private:
  double r2_;
  Vector centre_;
  BallOccupancy occ_;
  Index run_ = -1;
  bool was_inside_ = false;
};

enum class EscapeOutcome { stuck, escaped, returned };
std::string_view to_string(EscapeOutcome e);

struct EscapeRecord {
  EscapeOutcome outcome = EscapeOutcome::stuck;
  Index first_escape = -1;  // first k with distance > far, or -1
  double final_distance = 0.0;
  double max_distance = 0.0;
  double initial_distance = 0.0;
};

/// Classification of one path around a critical point: escaped if the final
/// distance exceeds `far`; stuck if it never moved further out than
/// max(near, initial distance); returned otherwise. A divergent path counts
/// as escaped.
EscapeRecord classify_escape(const std::vector<Vector>& path, const Vector& critical,
                             double far, double near);

/// Default thresholds: far = 10 |x0 - c|, near = 0.1 |x0 - c|.
struct EscapeThresholds {
  double far;
  double near;
};
EscapeThresholds default_escape_thresholds(const Vector& x0, const Vector& critical);

/// Streaming per-run escape classification.
class EscapeMetric final : public PathMetric {
 public:
  EscapeMetric(Index runs, Vector critical, double far, double near);

  std::unique_ptr<PathMetric> fresh() const override;
  void begin(Index run) override;
  void observe(Index k, const Vector& x) override;
  void end(Index run, Index diverged_at) override;
  void merge(const PathMetric& other) override;

  const std::vector<EscapeRecord>& records() const noexcept { return records_; }
  Index count(EscapeOutcome e) const;

 private:
  Vector critical_;
  double far_;
  double near_;
  std::vector<EscapeRecord> records_;
  std::vector<char> touched_;
  EscapeRecord current_;
};

}  // namespace samsde
