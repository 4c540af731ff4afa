// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/models.hpp"

#include <algorithm>
#include <cmath>

namespace samsde::testing {

/// Central-difference gradient of model.value.
inline Vector fd_gradient(const LossModel& model, const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  Vector xp = x;
  for (Index j = 0; j < x.size(); ++j) {
    const double step = h * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + step;
    const double fp = model.value(xp);
    xp[j] = x[j] - step;
    const double fm = model.value(xp);
    xp[j] = x[j];
    g[j] = (fp - fm) / (2.0 * step);
  }
  return g;
}

/// Central-difference Jacobian of model.gradient (not symmetrised).
inline Matrix fd_jacobian_of_gradient(const LossModel& model, const Vector& x, double h = 1e-6) {
  const Index d = x.size();
  Matrix j(d, d);
  Vector xp = x;
  Vector gp(d), gm(d);
  for (Index c = 0; c < d; ++c) {
    const double step = h * std::max(1.0, std::abs(x[c]));
    xp[c] = x[c] + step;
    model.gradient(xp, gp);
    xp[c] = x[c] - step;
    model.gradient(xp, gm);
    xp[c] = x[c];
    j.col(c) = (gp - gm) / (2.0 * step);
  }
  return j;
}

/// |a - b| / max(|b|, floor), in the infinity norm.
inline double rel_error(const Vector& a, const Vector& b, double floor = 1.0) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), floor);
}

inline double rel_error(const Matrix& a, const Matrix& b, double floor = 1.0) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), floor);
}

}  // namespace samsde::testing
