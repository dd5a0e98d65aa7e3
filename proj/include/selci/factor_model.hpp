#pragma once

#include "selci/types.hpp"

namespace selci {

/// Principal-component estimate of an approximate factor model X = F L' + E.
struct FactorEstimate {
  Index k_hat = 0;
  /// n x k_hat factors, normalised so that F'F / n = I.
  Matrix F_hat;
  /// IC(k) and V(k) for k = 1..k_max (entry k-1).
  Vector ic_values;
  Vector v_values;
};

/// Which Gram matrix is eigendecomposed. Both give the same factors; Auto picks
/// the smaller of X'X (p x p) and XX' (n x n).
enum class FactorRoute { Auto, Loadings, Observations };

inline constexpr Index kDefaultKMax = 5;

/// Relative floor applied to V(k) before taking logs. An exact low-rank fit has
/// V(k) at roundoff level, whose logarithm is noise; flooring makes every exact
/// fit tie and the penalty then picks the smallest such k.
inline constexpr double kResidualFloor = 1e-12;

/// Estimates the number of factors by minimising
///   IC(k) = log V(k) + k (n + p)/(n p) log(n p / (n + p)),   k = 1..k_max,
/// where V(k) is the squared Frobenius residual of X after regressing on the
/// first k principal-component factors. Ties resolve to the smallest k.
///
/// Throws NumericInput on non-finite X, InvalidConfig on a bad k_max and
/// DecompositionError if the eigensolver fails.
[[nodiscard]] FactorEstimate estimate_factors(const Matrix& X, Index k_max = kDefaultKMax,
                                              FactorRoute route = FactorRoute::Auto);

/// (I - F (F'F)^{-1} F') A. An empty F (zero columns) returns A unchanged.
/// Throws SingularMatrix if F'F is not invertible.
[[nodiscard]] Matrix complement_projection(const Matrix& F, const Matrix& A);

}  // namespace selci
