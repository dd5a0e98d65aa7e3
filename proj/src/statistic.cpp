#include "selci/statistic.hpp"

#include "selci/error.hpp"
#include "selci/oga.hpp"

#include <cmath>

namespace selci {

FixedSetStatistic fixed_set_statistic(const Matrix& X, const Vector& Y, const IndexList& J,
                                      Index j, const Matrix& F_hat, CovMode mode, Index q) {
  const Index pos = position_of(J, j);
  if (pos < 0) throw InvalidConfig("fixed_set_statistic: j is not in J");
  const IvEstimate est = iv_estimate(X, Y, J, F_hat);
  const CovEstimate cov = covariance(est, mode, q);
  const double vjj = cov.V(pos, pos);
  if (!(vjj > 0.0)) throw NumericInput("fixed_set_statistic: nonpositive variance estimate");
  return {est.beta_tilde(pos), std::sqrt(vjj / static_cast<double>(X.rows()))};
}

StatisticDetail test_statistic_detail(const Matrix& X, const Vector& Y, Index j, double theta,
                                      const StatisticConfig& cfg, const Matrix& F_hat) {
  StatisticDetail out;
  out.j_hat = oga_hdbic(X, Y).j_hat;
  out.value = excluded_sentinel(cfg.side);
  if (!contains(out.j_hat, j)) return out;
  const FixedSetStatistic fs = fixed_set_statistic(X, Y, out.j_hat, j, F_hat, cfg.mode, cfg.q);
  out.selected = true;
  out.beta = fs.beta;
  out.sigma = fs.sigma;
  out.signed_t = fs.at(theta);
  out.value = cfg.side == Side::Two ? std::abs(out.signed_t) : out.signed_t;
  return out;
}

double test_statistic(const Matrix& X, const Vector& Y, Index j, double theta,
                      const StatisticConfig& cfg) {
  const Index kk = std::min<Index>(cfg.k_max, std::min(X.rows(), X.cols()));
  const Matrix F_hat = estimate_factors(X, kk).F_hat;
  return test_statistic_detail(X, Y, j, theta, cfg, F_hat).value;
}

}  // namespace selci
