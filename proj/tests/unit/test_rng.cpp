// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace samsde {
namespace {

using Block = std::array<std::uint32_t, 4>;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswerZero) {
  const Block r = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r, (Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const Block r =
      philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(r, (Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const Block r = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(r, (Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, IdenticalParametersGiveIdenticalSequences) {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.normal(), b.normal());
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(42, 7);
  RngStream b(42, 8);
  RngStream c(43, 7);
  int same_ab = 0;
  int same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(RngStream, SubstreamsAreDistinct) {
  const RngStream base(5, 0);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 256; ++i) firsts.insert(base.substream(i).substream(0).next_u64());
  EXPECT_EQ(firsts.size(), 256u);
}

TEST(RngStream, UniformIsInOpenInterval) {
  RngStream rng(1, 1);
  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u / n;
  }
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RngStream, UniformIndexCoversRange) {
  RngStream rng(2, 1);
  std::array<int, 7> hits{};
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.uniform_index(7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (int h : hits) EXPECT_NEAR(h, 10000, 450);
}

TEST(GaussianVector, ZeroCovarianceGivesZero) {
  RngStream rng(3, 0);
  const Vector v = gaussian_vector(rng, 3, Matrix::Zero(3, 3));
  EXPECT_EQ(v, Vector::Zero(3));
}

TEST(GaussianVector, RejectsWrongShape) {
  RngStream rng(3, 0);
  EXPECT_THROW(gaussian_vector(rng, 3, Matrix::Identity(2, 2)), PreconditionError);
}

TEST(GaussianVector, MeanWithinCltBound) {
  RngStream rng(4, 0);
  const int n = 1000000;
  Vector sum = Vector::Zero(2);
  const SymMatrix id = SymMatrix::identity(2);
  for (int i = 0; i < n; ++i) sum += gaussian_vector(rng, 2, id);
  const Vector mean = sum / n;
  EXPECT_LT(std::abs(mean[0]), 4.0 / std::sqrt(n));
  EXPECT_LT(std::abs(mean[1]), 4.0 / std::sqrt(n));
}

TEST(GaussianVector, SampleCovarianceMatchesSquare) {
  RngStream rng(5, 0);
  const int n = 1000000;
  Vector d(2);
  d << 1.0, 2.0;
  const SymMatrix root = SymMatrix::diagonal(d);
  Matrix acc = Matrix::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    const Vector v = gaussian_vector(rng, 2, root);
    acc += v * v.transpose();
  }
  acc /= n;
  EXPECT_NEAR(acc(0, 0), 1.0, 0.02);
  EXPECT_NEAR(acc(1, 1), 4.0, 0.08);
  EXPECT_NEAR(acc(0, 1), 0.0, 0.02);
}

}  // namespace
}  // namespace samsde
