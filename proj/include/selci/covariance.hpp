#pragma once

#include "selci/iv_estimator.hpp"

namespace selci {

enum class CovMode {
  Uncorrelated,  ///< S = X~' diag(w^2) X~
  Hac,           ///< Bartlett-weighted autocovariances of g_t = w_t x~_t up to lag q
};

struct CovEstimate {
  Matrix V;  ///< n gram^{-1} S gram^{-1}
  Matrix S;
  CovMode mode = CovMode::Hac;
  Index q = 0;
};

/// Sandwich covariance of sqrt(n)(beta~ - beta) for an IV estimate. With
/// `first_power_weights` the uncorrelated mode weights by w_t instead of w_t^2;
/// that variant is not positive semidefinite and exists for comparison only.
[[nodiscard]] CovEstimate covariance(const IvEstimate& est, CovMode mode, Index q,
                                     bool first_power_weights = false);

}  // namespace selci
