#include "selci/covariance.hpp"

#include "selci/error.hpp"

namespace selci {

CovEstimate covariance(const IvEstimate& est, CovMode mode, Index q, bool first_power_weights) {
  if (mode == CovMode::Hac && q < 0) throw InvalidConfig("covariance: q must be >= 0");
  const Matrix& Xt = est.x_tilde;
  const Vector& w = est.residuals;
  const Index n = Xt.rows();

  CovEstimate cov;
  cov.mode = mode;
  cov.q = mode == CovMode::Hac ? q : 0;

  if (mode == CovMode::Uncorrelated) {
    const Vector weights = first_power_weights ? w : Vector(w.array().square());
    cov.S = Xt.transpose() * weights.asDiagonal() * Xt;
  } else {
    const Matrix G = w.asDiagonal() * Xt;  // row t is g_t'
    cov.S = G.transpose() * G;
    for (Index nu = 1; nu <= std::min<Index>(q, n - 1); ++nu) {
      const double weight = 1.0 - static_cast<double>(nu) / static_cast<double>(q + 1);
      const Matrix cross = G.bottomRows(n - nu).transpose() * G.topRows(n - nu);
      cov.S += weight * (cross + cross.transpose());
    }
  }

  const auto llt = est.gram.llt();
  if (llt.info() != Eigen::Success) {
    throw SingularMatrix("covariance: Gram matrix is not positive definite", spd_condition(est.gram));
  }
  const Matrix inv = llt.solve(Matrix::Identity(est.gram.rows(), est.gram.cols()));
  cov.V = static_cast<double>(n) * inv * cov.S * inv;
  cov.V = 0.5 * (cov.V + cov.V.transpose()).eval();
  return cov;
}

}  // namespace selci
