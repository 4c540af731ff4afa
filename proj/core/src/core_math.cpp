// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/core_math.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace samsde {

namespace {

std::string indefinite_message(double lambda) {
  std::ostringstream os;
  os.precision(17);
  os << "indefinite covariance: most negative eigenvalue " << lambda;
  return os.str();
}

}  // namespace

IndefiniteCovariance::IndefiniteCovariance(double min_eigenvalue)
    : Error(indefinite_message(min_eigenvalue)), min_eigenvalue_(min_eigenvalue) {}

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw PreconditionError("SymMatrix: matrix is not square");
  }
  if (!m.allFinite()) {
    throw PreconditionError("SymMatrix: non-finite entry");
  }
  if (!is_symmetric(m)) {
    throw PreconditionError("SymMatrix: matrix is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Index d) { return {Matrix::Identity(d, d), Unchecked{}}; }

SymMatrix SymMatrix::zero(Index d) { return {Matrix::Zero(d, d), Unchecked{}}; }

SymMatrix SymMatrix::diagonal(const Vector& diag) {
  return {Matrix(diag.asDiagonal()), Unchecked{}};
}

SymMatrix SymMatrix::symmetric_part(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw PreconditionError("SymMatrix::symmetric_part: matrix is not square");
  }
  return {0.5 * (m + m.transpose()), Unchecked{}};
}

SymMatrix SymMatrix::scaled(double s) const { return {s * m_, Unchecked{}}; }

Matrix SymEigen::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.transpose();
}

SymEigen sym_eigendecompose(const SymMatrix& m) {
  const Index d = m.dim();
  SymEigen out;
  if (d == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error("sym_eigendecompose: eigen solver did not converge");
  }
  // Eigen returns ascending order; flip to descending.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

SymEigen sym_eigendecompose(const Matrix& m) {
  if (!is_symmetric(m)) {
    throw PreconditionError("sym_eigendecompose: input is not symmetric");
  }
  return sym_eigendecompose(SymMatrix(m));
}

PsdRoot psd_sqrt(const SymMatrix& m, double clamp_tol) {
  if (!(clamp_tol >= 0.0)) {
    throw PreconditionError("psd_sqrt: clamp_tol must be >= 0");
  }
  const SymEigen eig = sym_eigendecompose(m);
  PsdRoot out;
  if (m.dim() == 0) return out;
  const double min_lambda = eig.values.minCoeff();
  if (min_lambda < -clamp_tol) {
    throw IndefiniteCovariance(min_lambda);
  }
  Vector roots(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    double lambda = eig.values[i];
    if (lambda < 0.0) {
      lambda = 0.0;
      ++out.clamped;
    }
    roots[i] = std::sqrt(lambda);
  }
  out.root = SymMatrix::symmetric_part(eig.vectors * roots.asDiagonal() *
                                       eig.vectors.transpose());
  return out;
}

double relative_frobenius(const Matrix& a, const Matrix& b) {
  const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
  return (a - b).norm() / denom;
}

}  // namespace samsde
