// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/core_math.hpp"

#include <array>
#include <cstdint>

namespace samsde {

/// Philox4x32-10 block function: maps (counter, key) to 128 random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream identified by (base_seed, stream_index).
///
/// The key is the base seed and the upper half of the counter is the stream
/// index, so distinct pairs never share a Philox input block. Identical pairs
/// reproduce identical sequences bit for bit. The stream is a value type: copy
/// it to fork, and derive one stream per trajectory instead of sharing one.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_index);

  std::uint64_t base_seed() const noexcept { return base_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return position_; }

  /// Child stream, deterministic in (this stream's identity, index) and
  /// independent of how much of this stream has been consumed.
  RngStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1), 53-bit resolution.
  double uniform();
  double normal();
  /// Uniform integer in [0, n); n > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  void fill_normal(Eigen::Ref<Vector> out);
  Vector normal_vector(Index d);

 private:
  void refill();

  std::uint64_t base_seed_;
  std::uint64_t stream_index_;
  std::uint64_t block_ = 0;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; used to hash stream identities.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// cov_sqrt * w with w ~ N(0, I_d), drawn from rng. cov_sqrt must be d x d.
Vector gaussian_vector(RngStream& rng, Index d, const Matrix& cov_sqrt);
Vector gaussian_vector(RngStream& rng, Index d, const SymMatrix& cov_sqrt);

}  // namespace samsde
