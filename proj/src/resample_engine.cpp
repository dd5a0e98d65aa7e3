#include "selci/resample_engine.hpp"

#include "selci/error.hpp"
#include "selci/iv_estimator.hpp"

#include <cmath>
#include <limits>

namespace selci {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ResampleEngine::ResampleEngine(const Matrix& X, const Matrix& F_hat, const ResampleSet& rs,
                               const StatisticConfig& cfg)
    : X_(X), F_hat_(F_hat), cfg_(cfg), j_hat_(rs.j_hat), beta_(rs.beta_tilde) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (rs.W.rows() != n) throw InvalidConfig("ResampleEngine: resample length differs from n");
  if (F_hat.cols() > 0 && F_hat.rows() != n) throw InvalidConfig("ResampleEngine: F_hat rows");
  steps_ = max_oga_steps(n, p);

  G_ = Matrix::Zero(p, p);
  G_.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  G_ = G_.selfadjointView<Eigen::Lower>();

  Vector fitted = Vector::Zero(n);
  for (std::size_t i = 0; i < j_hat_.size(); ++i) {
    fitted.noalias() += beta_(static_cast<Index>(i)) * X.col(j_hat_[i]);
  }
  A_ = rs.W.colwise() + fitted;
  XtA_ = X.transpose() * A_;
  AtA_ = A_.colwise().squaredNorm().transpose();

  const Index k = F_hat.cols();
  if (k > 0) {
    const Matrix FtF = F_hat.transpose() * F_hat;
    if (spd_condition(FtF) > kMaxGramCondition) {
      throw SingularMatrix("ResampleEngine: F'F is singular", spd_condition(FtF));
    }
    FtF_inv_ = FtF.llt().solve(Matrix::Identity(k, k));
    FtX_ = F_hat.transpose() * X;
    FtA_ = F_hat.transpose() * A_;
  } else {
    FtF_inv_.resize(0, 0);
    FtX_.resize(0, p);
    FtA_.resize(0, A_.cols());
  }
}

double ResampleEngine::beta_tilde(Index j) const {
  const Index pos = position_of(j_hat_, j);
  return pos < 0 ? 0.0 : beta_(pos);
}

Vector ResampleEngine::statistics(Index j, double theta) const {
  if (j < 0 || j >= X_.cols()) throw InvalidConfig("ResampleEngine: column out of range");
  const double d = theta - beta_tilde(j);
  const Index B = A_.cols();
  Vector out(B);
#pragma omp parallel if (B > 1)
  {
    GramOgaWorkspace ws;
    GramPath path;
#pragma omp for schedule(static)
    for (Index b = 0; b < B; ++b) out(b) = evaluate(b, j, d, theta, ws, path);
  }
  return out;
}

double ResampleEngine::evaluate(Index b, Index j, double d, double theta, GramOgaWorkspace& ws,
                                GramPath& path) const {
  const Index n = X_.rows();
  const Index p = X_.cols();
  const Vector Xty = XtA_.col(b) + d * G_.col(j);
  const double yty = AtA_(b) + 2.0 * d * XtA_(j, b) + d * d * G_(j, j);
  oga_gram(G_, Xty, yty, steps_, ws, path);
  const Index m = hdbic(path.residual_norms, n, p);
  const IndexList J(path.order.begin(), path.order.begin() + m);
  const Index pos = position_of(J, j);
  if (pos < 0) return kNaN;

  const Index k = F_hat_.cols();
  Matrix gram(m, m);
  Vector rhs(m);
  for (Index a = 0; a < m; ++a) {
    rhs(a) = Xty(J[static_cast<std::size_t>(a)]);
    for (Index c = 0; c < m; ++c) gram(a, c) = G_(J[static_cast<std::size_t>(a)], J[static_cast<std::size_t>(c)]);
  }
  Matrix M;  // (F'F)^{-1} F'X_J
  if (k > 0) {
    const Matrix FtXJ = select_columns(FtX_, J);
    M = FtF_inv_ * FtXJ;
    gram.noalias() -= FtXJ.transpose() * M;
    const Vector FtY = FtA_.col(b) + d * FtX_.col(j);
    rhs.noalias() -= M.transpose() * FtY;
  }
  if (!(spd_condition(gram) <= kMaxGramCondition)) return kNaN;
  const Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) return kNaN;
  const Vector beta = llt.solve(rhs);
  const Vector h = llt.solve(Vector::Unit(m, pos));

  // s_t = w_t (x~_t' h), with w = Y - X_J beta and x~ = (I - P_F) X_J.
  Vector w = A_.col(b) + d * X_.col(j);
  Vector xh = Vector::Zero(n);
  for (Index a = 0; a < m; ++a) {
    const auto col = X_.col(J[static_cast<std::size_t>(a)]);
    w.noalias() -= beta(a) * col;
    xh.noalias() += h(a) * col;
  }
  if (k > 0) xh.noalias() -= F_hat_ * (M * h);
  const Vector s = w.cwiseProduct(xh);

  double var = s.squaredNorm();
  if (cfg_.mode == CovMode::Hac) {
    for (Index nu = 1; nu <= std::min<Index>(cfg_.q, n - 1); ++nu) {
      const double weight = 1.0 - static_cast<double>(nu) / static_cast<double>(cfg_.q + 1);
      var += weight * 2.0 * s.tail(n - nu).dot(s.head(n - nu));
    }
  }
  if (!(var > 0.0)) return kNaN;
  return (beta(pos) - theta) / std::sqrt(var);
}

namespace reference {

Vector resample_statistics(const Matrix& X, const Matrix& F_hat, const ResampleSet& rs,
                           const StatisticConfig& cfg, Index j, double theta) {
  StatisticConfig one = cfg;
  one.side = Side::One;
  const Index pos = position_of(rs.j_hat, j);
  const double d = theta - (pos < 0 ? 0.0 : rs.beta_tilde(pos));
  Vector fitted = Vector::Zero(X.rows());
  for (std::size_t i = 0; i < rs.j_hat.size(); ++i) {
    fitted += rs.beta_tilde(static_cast<Index>(i)) * X.col(rs.j_hat[i]);
  }
  Vector out(rs.W.cols());
  for (Index b = 0; b < rs.W.cols(); ++b) {
    const Vector Y = fitted + rs.W.col(b) + d * X.col(j);
    try {
      const StatisticDetail det = test_statistic_detail(X, Y, j, theta, one, F_hat);
      out(b) = det.selected ? det.signed_t : kNaN;
    } catch (const Error&) {
      out(b) = kNaN;
    }
  }
  return out;
}

}  // namespace reference

}  // namespace selci
