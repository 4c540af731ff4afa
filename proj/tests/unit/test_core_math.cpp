// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/core_math.hpp"
#include "samsde/rng.hpp"

#include <gtest/gtest.h>

namespace samsde {
namespace {

Matrix random_symmetric(Index d, RngStream& rng) {
  Matrix a(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) a(i, j) = rng.normal();
  }
  return 0.5 * (a + a.transpose());
}

TEST(SymEigen, IdentityHasUnitEigenvalues) {
  const SymEigen e = sym_eigendecompose(SymMatrix::identity(3));
  for (Index i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(e.values[i], 1.0);
}

TEST(SymEigen, DiagonalSortedDescendingWithAxisVectors) {
  const SymEigen e = sym_eigendecompose(SymMatrix::diagonal(Vector::Map(std::array{-1.0, 2.0}.data(), 2)));
  EXPECT_DOUBLE_EQ(e.values[0], 2.0);
  EXPECT_DOUBLE_EQ(e.values[1], -1.0);
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-15);
}

TEST(SymEigen, RandomReconstruction) {
  RngStream rng(11, 0);
  const Matrix m = random_symmetric(5, rng);
  const SymEigen e = sym_eigendecompose(m);
  EXPECT_LT(relative_frobenius(e.reconstruct(), m), 1e-10);
  for (Index i = 1; i < 5; ++i) EXPECT_GE(e.values[i - 1], e.values[i]);
}

TEST(SymEigen, ReconstructionPropertyUpToFifty) {
  RngStream rng(12, 0);
  for (Index d : {1, 2, 3, 7, 16, 31, 50}) {
    for (int rep = 0; rep < 4; ++rep) {
      const Matrix m = random_symmetric(d, rng);
      const SymEigen e = sym_eigendecompose(m);
      EXPECT_LT(relative_frobenius(e.reconstruct(), m), 1e-10) << "d=" << d;
      EXPECT_LT((e.vectors.transpose() * e.vectors - Matrix::Identity(d, d)).norm(), 1e-10);
    }
  }
}

TEST(SymEigen, RejectsNonSymmetric) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(sym_eigendecompose(m), PreconditionError);
  EXPECT_THROW(SymMatrix{m}, PreconditionError);
}

TEST(SymMatrix, AcceptsRoundoffAsymmetry) {
  Matrix m(2, 2);
  m << 1.0, 0.5, 0.5 * (1.0 + 1e-14), 1.0;
  const SymMatrix s(m);
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(PsdSqrt, Identity) {
  const PsdRoot r = psd_sqrt(SymMatrix::identity(4));
  EXPECT_LT((r.root.matrix() - Matrix::Identity(4, 4)).norm(), 1e-14);
  EXPECT_EQ(r.clamped, 0);
}

TEST(PsdSqrt, Diagonal) {
  Vector d(2);
  d << 4.0, 9.0;
  const PsdRoot r = psd_sqrt(SymMatrix::diagonal(d));
  EXPECT_NEAR(r.root(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(r.root(1, 1), 3.0, 1e-14);
  EXPECT_NEAR(r.root(0, 1), 0.0, 1e-14);
}

TEST(PsdSqrt, ClampsTinyNegativeEigenvalue) {
  // Build M = Q diag(2, 0.5, -1e-9) Q^T and compare S S against M with the
  // negative eigenvalue zeroed.
  RngStream rng(13, 0);
  const SymEigen basis = sym_eigendecompose(random_symmetric(3, rng));
  Vector lam(3);
  lam << 2.0, 0.5, -1e-9;
  const Matrix q = basis.vectors;
  const Matrix m = q * lam.asDiagonal() * q.transpose();
  Vector lam_plus = lam;
  lam_plus[2] = 0.0;
  const Matrix m_plus = q * lam_plus.asDiagonal() * q.transpose();

  const PsdRoot r = psd_sqrt(SymMatrix::symmetric_part(m), 1e-8);
  EXPECT_EQ(r.clamped, 1);
  EXPECT_LT((r.root.matrix() * r.root.matrix() - m_plus).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PsdSqrt, RejectsIndefinite) {
  Vector d(2);
  d << 1.0, -1e-3;
  try {
    psd_sqrt(SymMatrix::diagonal(d), 1e-8);
    FAIL() << "expected IndefiniteCovariance";
  } catch (const IndefiniteCovariance& e) {
    EXPECT_DOUBLE_EQ(e.min_eigenvalue(), -1e-3);
  }
}

TEST(PsdSqrt, PsdSquareReproducesMatrix) {
  RngStream rng(14, 0);
  for (Index d : {2, 5, 20}) {
    Matrix a(d, d);
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < d; ++i) a(i, j) = rng.normal();
    }
    const Matrix m = a * a.transpose();
    const PsdRoot r = psd_sqrt(SymMatrix::symmetric_part(m));
    EXPECT_LT(relative_frobenius(r.root.matrix() * r.root.matrix(), m), 1e-10);
    const Vector want = sym_eigendecompose(SymMatrix::symmetric_part(m)).values;
    const Vector got =
        sym_eigendecompose(SymMatrix::symmetric_part(r.root.matrix() * r.root.matrix())).values;
    EXPECT_LT((want - got).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff(), 1e-10);
  }
}

}  // namespace
}  // namespace samsde
