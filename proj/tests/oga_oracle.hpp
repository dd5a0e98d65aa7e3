#pragma once

#include "selci/oga.hpp"
#include "selci/types.hpp"

#include <cmath>

namespace selci::testing {

// Forward stepwise regression by brute force: after every pick, refit least
// squares of Y on all picked columns from scratch and recompute the residual.
struct NaiveStepwise {
  IndexList order;
  Vector beta;
  std::vector<double> residual_norms;
};

inline NaiveStepwise naive_stepwise(const Matrix& X, const Vector& Y, Index m) {
  NaiveStepwise out;
  out.beta = Vector::Zero(X.cols());
  Vector U = Y;
  for (Index k = 0; k < m; ++k) {
    double best = -1.0;
    Index pick = -1;
    for (Index j = 0; j < X.cols(); ++j) {
      if (contains(out.order, j)) continue;
      const double s = std::abs(X.col(j).dot(U)) / X.col(j).norm();
      if (s > best) {
        best = s;
        pick = j;
      }
    }
    out.order.push_back(pick);
    const Matrix XS = select_columns(X, out.order);
    const Vector b = (XS.transpose() * XS).ldlt().solve(XS.transpose() * Y);
    U = Y - XS * b;
    out.residual_norms.push_back(U.norm());
    out.beta.setZero();
    for (std::size_t i = 0; i < out.order.size(); ++i) out.beta(out.order[i]) = b(static_cast<Index>(i));
  }
  return out;
}

// Same selection order and same sign of every step's correlation.
inline bool same_path(const SelectionResult& a, const SelectionResult& b) {
  if (a.j_hat != b.j_hat) return false;
  for (Index k = 0; k < a.m; ++k) {
    if ((a.beta_q(k) < 0.0) != (b.beta_q(k) < 0.0)) return false;
  }
  return true;
}

}  // namespace selci::testing
