#pragma once

#include "selci/covariance.hpp"
#include "selci/interval.hpp"
#include "selci/oga.hpp"

namespace selci {

/// Least squares on the selected columns treated as fixed: beta^ols_j -+ t_{n-m} s sqrt(c_jj),
/// with s^2 = RSS / (n - m) and c_jj the diagonal of (X_J'X_J)^{-1}.
[[nodiscard]] IntervalReport t_interval(const Matrix& X, const Vector& Y, const IndexList& j_hat,
                                        Index j, double alpha, Side side = Side::One);

/// Normal interval around the factor-projected estimate: beta~_j -+ z sqrt(V_jj / n).
[[nodiscard]] IntervalReport iv_interval(const IvEstimate& est, const CovEstimate& cov, Index j,
                                         double alpha, Side side = Side::One);

/// Truncated-normal interval conditional on the OGA selection event of `sel`
/// (its m steps and signs). The lower limit delta solves
///   1 - F_{delta, sigma^2 ||v_j||^2}^{[V_lo, V_up]}(beta^ols_j) = alpha
/// by bisection; the two-sided upper limit solves the same equation at 1 - alpha.
[[nodiscard]] IntervalReport ps_interval(const Matrix& X, const Vector& Y, const SelectionResult& sel,
                                         Index j, double alpha, double sigma, Side side = Side::One);

/// Root of truncnorm_cdf(x, delta, sd, a, b) = target in delta (decreasing in delta).
/// Returns NaN if no bracket is found.
[[nodiscard]] double solve_truncnorm_location(double x, double sd, double a, double b, double target,
                                              Index* iterations = nullptr);

}  // namespace selci
