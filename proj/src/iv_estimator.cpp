#include "selci/iv_estimator.hpp"

#include "selci/error.hpp"
#include "selci/factor_model.hpp"

#include <limits>

namespace selci {

double spd_condition(const Matrix& S) {
  if (S.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

IvEstimate iv_estimate(const Matrix& X, const Vector& Y, const IndexList& J, const Matrix& F_hat) {
  if (X.rows() != Y.size()) throw InvalidConfig("iv_estimate: X rows and Y length differ");
  if (F_hat.cols() > 0 && F_hat.rows() != X.rows()) {
    throw InvalidConfig("iv_estimate: F_hat rows differ from X rows");
  }
  const auto m = static_cast<Index>(J.size());
  if (m + F_hat.cols() > X.rows()) throw InvalidConfig("iv_estimate: |J| exceeds n - k");

  IvEstimate est;
  est.J = J;
  const Matrix XJ = select_columns(X, J);
  est.x_tilde = complement_projection(F_hat, XJ);
  est.gram = est.x_tilde.transpose() * est.x_tilde;
  est.condition = spd_condition(est.gram);
  if (!(est.condition <= kMaxGramCondition)) {
    throw SingularMatrix("iv_estimate: projected Gram matrix is singular", est.condition);
  }
  est.beta_tilde = est.gram.llt().solve(est.x_tilde.transpose() * Y);
  est.residuals = Y - XJ * est.beta_tilde;
  return est;
}

}  // namespace selci
