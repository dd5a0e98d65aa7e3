#pragma once

#include "selci/oga.hpp"

namespace selci {

/// Linear description {Y : A Y <= b} of the event that OGA picks the columns
/// of `sel` in order with the observed signs. Step k contributes, for every
/// column i not yet selected and both signs,
///   +-a_i(Y) - s_k a_{j_k}(Y) <= 0,   a_i(Y) = X_i' (I - Q_{k-1} Q_{k-1}') Y / ||X_i||,
/// where s_k is the sign of q_k'U^{(k-1)}. A step with no competitor left adds
/// no rows, so with p = m = 1 the polytope is all of R^n. b is identically zero.
struct Polytope {
  Matrix A;
  Vector b;
};

[[nodiscard]] Polytope selection_polytope(const Matrix& X, const SelectionResult& sel);

/// Range of t = eta'Y over which Y stays inside the polytope when it moves
/// along eta with the orthogonal part z = Y - eta (eta'Y)/||eta||^2 fixed.
struct TruncationLimits {
  double lower = 0.0;
  double upper = 0.0;
  double eta_y = 0.0;
  double eta_norm = 0.0;
  bool feasible = true;
  bool widened = false;
};

/// Limits from an explicit polytope.
[[nodiscard]] TruncationLimits truncation_limits(const Polytope& poly, const Vector& Y,
                                                 const Vector& eta);

/// The same limits computed step by step without materialising A; O(n p m).
[[nodiscard]] TruncationLimits truncation_limits(const Matrix& X, const SelectionResult& sel,
                                                 const Vector& Y, const Vector& eta);

/// eta = X_J (X_J'X_J)^{-1} e_j = Q R^{-T} e_j for the selected column j, so that
/// eta'Y is the least-squares coefficient of j on the selected set.
[[nodiscard]] Vector ols_contrast(const SelectionResult& sel, Index j);

}  // namespace selci
