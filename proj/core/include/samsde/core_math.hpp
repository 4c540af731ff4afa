// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace samsde {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Raised by psd_sqrt when an eigenvalue lies below -clamp_tol.
class IndefiniteCovariance : public Error {
 public:
  explicit IndefiniteCovariance(double min_eigenvalue);
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kDefaultClampTol = 1e-8;

/// True when |m - m^T| <= rel_tol * max(1, max|m|) entrywise.
bool is_symmetric(const Matrix& m, double rel_tol = kSymmetryTol);

/// Dense symmetric matrix. Symmetry is checked on construction and the stored
/// matrix is then replaced by its exact symmetric part.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Index d);
  static SymMatrix zero(Index d);
  static SymMatrix diagonal(const Vector& diag);
  /// (m + m^T) / 2 without any tolerance check.
  static SymMatrix symmetric_part(const Matrix& m);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

  SymMatrix scaled(double s) const;

 private:
  struct Unchecked {};
  SymMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}
  Matrix m_;
};

struct SymEigen {
  Vector values;   // descending
  Matrix vectors;  // columns are orthonormal eigenvectors
  Matrix reconstruct() const;
};

SymEigen sym_eigendecompose(const SymMatrix& m);
/// Rejects non-symmetric input with PreconditionError.
SymEigen sym_eigendecompose(const Matrix& m);

struct PsdRoot {
  SymMatrix root;
  int clamped = 0;  // eigenvalues in [-clamp_tol, 0) that were zeroed
};

/// Principal square root of a symmetric positive semi-definite matrix.
/// Eigenvalues in [-clamp_tol, 0) are treated as zero; anything smaller throws
/// IndefiniteCovariance carrying the most negative eigenvalue.
PsdRoot psd_sqrt(const SymMatrix& m, double clamp_tol = kDefaultClampTol);

/// Relative Frobenius distance |a - b|_F / max(|b|_F, tiny).
double relative_frobenius(const Matrix& a, const Matrix& b);

}  // namespace samsde
