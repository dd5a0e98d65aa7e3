#pragma once

#include "selci/covariance.hpp"
#include "selci/factor_model.hpp"

#include <limits>

namespace selci {

enum class Side { One, Two };

struct StatisticConfig {
  Index k_max = kDefaultKMax;
  CovMode mode = CovMode::Hac;
  Index q = 1;
  Side side = Side::One;
};

/// Value returned when j is not selected: 0 for the two-sided |T|, -inf for the
/// signed one-sided statistic.
[[nodiscard]] inline double excluded_sentinel(Side side) {
  return side == Side::Two ? 0.0 : -std::numeric_limits<double>::infinity();
}

struct StatisticDetail {
  bool selected = false;
  double value = 0.0;     ///< statistic as returned by test_statistic()
  double signed_t = 0.0;  ///< (beta~_j - theta) / sigma_j
  double beta = 0.0;      ///< beta~_j from the factor-projected fit
  double sigma = 0.0;     ///< sqrt(V_jj / n)
  IndexList j_hat;
};

/// Runs OGA + HDBIC on (X, Y). If j is selected, fits the factor-projected
/// estimate on the selected set and returns T_j = (beta~_j - theta)/sqrt(V_jj/n)
/// (signed for Side::One, absolute for Side::Two); otherwise the sentinel.
/// F_hat is estimated from X with cfg.k_max unless supplied.
[[nodiscard]] double test_statistic(const Matrix& X, const Vector& Y, Index j, double theta,
                                    const StatisticConfig& cfg);

[[nodiscard]] StatisticDetail test_statistic_detail(const Matrix& X, const Vector& Y, Index j,
                                                    double theta, const StatisticConfig& cfg,
                                                    const Matrix& F_hat);

/// Observed-data pieces for a fixed selected set: beta~_j and sigma_j.
struct FixedSetStatistic {
  double beta = 0.0;
  double sigma = 0.0;
  [[nodiscard]] double at(double theta) const { return (beta - theta) / sigma; }
};

[[nodiscard]] FixedSetStatistic fixed_set_statistic(const Matrix& X, const Vector& Y,
                                                    const IndexList& J, Index j,
                                                    const Matrix& F_hat, CovMode mode, Index q);

}  // namespace selci
