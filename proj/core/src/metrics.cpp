// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace samsde {

std::int64_t BallOccupancy::jumps_between(Index begin, Index end) const {
  std::int64_t total = 0;
  for (Index k = std::max<Index>(begin, 0); k < end && k < static_cast<Index>(inside.size()); ++k) {
    total += jumps(k);
  }
  return total;
}

double BallOccupancy::mean_outside(Index begin, Index end) const {
  double total = 0.0;
  Index n = 0;
  for (Index k = std::max<Index>(begin, 0); k < end && k < static_cast<Index>(inside.size()); ++k) {
    total += static_cast<double>(runs - inside[k]);
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

Index BallOccupancy::ever_entered() const {
  return static_cast<Index>(
      std::count_if(first_entry.begin(), first_entry.end(), [](Index k) { return k >= 0; }));
}

BallOccupancy ball_occupancy(const std::vector<std::vector<Vector>>& paths, double radius,
                             const Vector& centre) {
  if (!(radius > 0.0)) throw PreconditionError("ball_occupancy: radius must be > 0");
  std::size_t steps = 0;
  for (const auto& p : paths) steps = std::max(steps, p.size());
  BallOccupancyMetric metric(static_cast<Index>(paths.size()),
                             steps == 0 ? 0 : static_cast<Index>(steps) - 1, radius, centre);
  for (std::size_t r = 0; r < paths.size(); ++r) {
    metric.begin(static_cast<Index>(r));
    for (std::size_t k = 0; k < paths[r].size(); ++k) {
      metric.observe(static_cast<Index>(k), paths[r][k]);
    }
    metric.end(static_cast<Index>(r), -1);
  }
  return metric.result();
}

BallOccupancyMetric::BallOccupancyMetric(Index runs, Index steps, double radius, Vector centre)
    : r2_(radius * radius), centre_(std::move(centre)) {
  if (!(radius > 0.0)) throw PreconditionError("ball_occupancy: radius must be > 0");
  occ_.runs = runs;
  const auto width = static_cast<std::size_t>(steps + 1);
  occ_.inside.assign(width, 0);
  occ_.entries.assign(width, 0);
  occ_.exits.assign(width, 0);
  occ_.first_entry.assign(static_cast<std::size_t>(runs), -1);
}

std::unique_ptr<PathMetric> BallOccupancyMetric::fresh() const {
  return std::make_unique<BallOccupancyMetric>(occ_.runs, static_cast<Index>(occ_.inside.size()) - 1,
                                               std::sqrt(r2_), centre_);
}

void BallOccupancyMetric::begin(Index run) {
  run_ = run;
  was_inside_ = false;
}

void BallOccupancyMetric::observe(Index k, const Vector& x) {
  const bool in = (x - centre_).squaredNorm() <= r2_;
  const auto i = static_cast<std::size_t>(k);
  if (in) {
    ++occ_.inside[i];
    auto& first = occ_.first_entry[static_cast<std::size_t>(run_)];
    if (first < 0) first = k;
  }
  if (k > 0 && in != was_inside_) {
    if (in) {
      ++occ_.entries[i];
    } else {
      ++occ_.exits[i];
    }
  }
  was_inside_ = in;
}

void BallOccupancyMetric::merge(const PathMetric& other) {
  const auto& o = dynamic_cast<const BallOccupancyMetric&>(other).occ_;
  for (std::size_t k = 0; k < occ_.inside.size(); ++k) {
    occ_.inside[k] += o.inside[k];
    occ_.entries[k] += o.entries[k];
    occ_.exits[k] += o.exits[k];
  }
  for (std::size_t r = 0; r < occ_.first_entry.size(); ++r) {
    if (o.first_entry[r] >= 0) occ_.first_entry[r] = o.first_entry[r];
  }
}

std::string_view to_string(EscapeOutcome e) {
  switch (e) {
    case EscapeOutcome::stuck:
      return "stuck";
    case EscapeOutcome::escaped:
      return "escaped";
    case EscapeOutcome::returned:
      return "returned";
  }
  return "?";
}

namespace {

void check_thresholds(double far, double near) {
  if (!(near > 0.0) || !(far > near)) {
    throw PreconditionError("escape: need 0 < near < far");
  }
}

EscapeOutcome final_outcome(const EscapeRecord& r, double far, double near) {
  if (r.final_distance > far) return EscapeOutcome::escaped;
  // The start itself lies outside `near` under the default thresholds, so the
  // bound is relative to wherever the path began.
  if (r.max_distance <= std::max(near, r.initial_distance)) return EscapeOutcome::stuck;
  return EscapeOutcome::returned;
}

}  // namespace

EscapeRecord classify_escape(const std::vector<Vector>& path, const Vector& critical, double far,
                             double near) {
  check_thresholds(far, near);
  EscapeRecord rec;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double dist = (path[k] - critical).norm();
    if (!std::isfinite(dist)) {
      rec.final_distance = std::numeric_limits<double>::infinity();
      rec.max_distance = rec.final_distance;
      if (rec.first_escape < 0) rec.first_escape = static_cast<Index>(k);
      rec.outcome = EscapeOutcome::escaped;
      return rec;
    }
    if (k == 0) rec.initial_distance = dist;
    rec.max_distance = std::max(rec.max_distance, dist);
    if (dist > far && rec.first_escape < 0) rec.first_escape = static_cast<Index>(k);
    rec.final_distance = dist;
  }
  rec.outcome = final_outcome(rec, far, near);
  return rec;
}

EscapeThresholds default_escape_thresholds(const Vector& x0, const Vector& critical) {
  const double d = (x0 - critical).norm();
  if (!(d > 0.0)) throw PreconditionError("escape: x0 coincides with the critical point");
  return {10.0 * d, 0.1 * d};
}

EscapeMetric::EscapeMetric(Index runs, Vector critical, double far, double near)
    : critical_(std::move(critical)),
      far_(far),
      near_(near),
      records_(static_cast<std::size_t>(runs)),
      touched_(static_cast<std::size_t>(runs), 0) {
  check_thresholds(far, near);
}

std::unique_ptr<PathMetric> EscapeMetric::fresh() const {
  return std::make_unique<EscapeMetric>(static_cast<Index>(records_.size()), critical_, far_, near_);
}

void EscapeMetric::begin(Index) { current_ = EscapeRecord{}; }

void EscapeMetric::observe(Index k, const Vector& x) {
  const double dist = (x - critical_).norm();
  if (k == 0) current_.initial_distance = dist;
  current_.max_distance = std::max(current_.max_distance, dist);
  if (dist > far_ && current_.first_escape < 0) current_.first_escape = k;
  current_.final_distance = dist;
}

void EscapeMetric::end(Index run, Index diverged_at) {
  if (diverged_at >= 0) {
    current_.final_distance = std::numeric_limits<double>::infinity();
    current_.max_distance = current_.final_distance;
    if (current_.first_escape < 0) current_.first_escape = diverged_at;
    current_.outcome = EscapeOutcome::escaped;
  } else {
    current_.outcome = final_outcome(current_, far_, near_);
  }
  records_[static_cast<std::size_t>(run)] = current_;
  touched_[static_cast<std::size_t>(run)] = 1;
}

void EscapeMetric::merge(const PathMetric& other) {
  const auto& o = dynamic_cast<const EscapeMetric&>(other);
  for (std::size_t r = 0; r < records_.size(); ++r) {
    if (o.touched_[r]) {
      records_[r] = o.records_[r];
      touched_[r] = 1;
    }
  }
}

Index EscapeMetric::count(EscapeOutcome e) const {
  Index n = 0;
  for (std::size_t r = 0; r < records_.size(); ++r) {
    if (touched_[r] && records_[r].outcome == e) ++n;
  }
  return n;
}

}  // namespace samsde
