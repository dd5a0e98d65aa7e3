#include "selci/baselines.hpp"

#include "selci/error.hpp"
#include "selci/polytope.hpp"
#include "selci/truncnorm.hpp"

#include <cmath>
#include <string>

namespace selci {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidConfig("alpha must lie in (0, 0.5)");
}
}  // namespace

IntervalReport t_interval(const Matrix& X, const Vector& Y, const IndexList& j_hat, Index j,
                          double alpha, Side side) {
  check_alpha(alpha);
  const Index pos = position_of(j_hat, j);
  if (pos < 0) throw InvalidConfig("t_interval: j is not selected");
  const Index n = X.rows();
  const auto m = static_cast<Index>(j_hat.size());
  if (m >= n) throw InvalidConfig("t_interval: need |J| < n");

  const Matrix XJ = select_columns(X, j_hat);
  const Eigen::HouseholderQR<Matrix> qr(XJ);
  const Matrix R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const double rmin = R.diagonal().cwiseAbs().minCoeff();
  const double rmax = R.diagonal().cwiseAbs().maxCoeff();
  if (!(rmin > 1e-10 * rmax)) throw SingularMatrix("t_interval: X_J'X_J is singular", kInf);
  const Vector beta = R.triangularView<Eigen::Upper>().solve(
      (qr.householderQ().transpose() * Y).head(m));
  const double rss = (Y - XJ * beta).squaredNorm();
  const double s = std::sqrt(rss / static_cast<double>(n - m));
  const Vector r = R.triangularView<Eigen::Upper>().transpose().solve(Vector::Unit(m, pos));
  const double se = s * r.norm();
  const double t = student_t_quantile(1.0 - alpha, static_cast<double>(n - m));

  IntervalReport rep;
  rep.j = j;
  rep.method = Method::T;
  rep.alpha = alpha;
  rep.side = side;
  rep.estimate = beta(pos);
  rep.lower = beta(pos) - t * se;
  rep.upper = side == Side::Two ? beta(pos) + t * se : kInf;
  return rep;
}

IntervalReport iv_interval(const IvEstimate& est, const CovEstimate& cov, Index j, double alpha,
                           Side side) {
  check_alpha(alpha);
  const Index pos = position_of(est.J, j);
  if (pos < 0) throw InvalidConfig("iv_interval: j is not in the estimated set");
  const auto n = static_cast<double>(est.x_tilde.rows());
  const double vjj = cov.V(pos, pos);
  IntervalReport rep;
  rep.j = j;
  rep.method = Method::Iv;
  rep.alpha = alpha;
  rep.side = side;
  rep.estimate = est.beta_tilde(pos);
  if (!(vjj >= 0.0)) {
    rep.lower = rep.upper = kNaN;
    rep.flags.emplace_back("negative_variance");
    return rep;
  }
  const double half = normal_quantile(1.0 - alpha) * std::sqrt(vjj / n);
  rep.lower = rep.estimate - half;
  rep.upper = side == Side::Two ? rep.estimate + half : kInf;
  return rep;
}

double solve_truncnorm_location(double x, double sd, double a, double b, double target,
                                Index* iterations) {
  auto f = [&](double delta) { return truncnorm_cdf(x, delta, sd, a, b); };
  // f decreases in delta: find lo with f(lo) > target and hi with f(hi) < target.
  double width = 10.0 * sd;
  double lo = x - width;
  double hi = x + width;
  Index it = 0;
  while (f(lo) <= target && it < 200) {
    width *= 2.0;
    lo = x - width;
    ++it;
  }
  width = 10.0 * sd;
  while (f(hi) >= target && it < 400) {
    width *= 2.0;
    hi = x + width;
    ++it;
  }
  if (!(f(lo) > target && f(hi) < target)) return kNaN;
  for (Index k = 0; k < 300; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    ++it;
    if (fm == target) {
      lo = hi = mid;
      break;
    }
    (fm > target ? lo : hi) = mid;
  }
  if (iterations != nullptr) *iterations = it;
  return 0.5 * (lo + hi);
}

IntervalReport ps_interval(const Matrix& X, const Vector& Y, const SelectionResult& sel, Index j,
                           double alpha, double sigma, Side side) {
  check_alpha(alpha);
  if (!(sigma > 0.0)) throw InvalidConfig("ps_interval: sigma must be positive");
  IntervalReport rep;
  rep.j = j;
  rep.method = Method::Ps;
  rep.alpha = alpha;
  rep.side = side;

  const Vector eta = ols_contrast(sel, j);
  const TruncationLimits lim = truncation_limits(X, sel, Y, eta);
  rep.estimate = lim.eta_y;
  if (lim.widened) rep.flags.emplace_back("ps_widened");
  if (!lim.feasible) {
    rep.lower = rep.upper = kNaN;
    rep.flags.emplace_back("ps_infeasible");
    return rep;
  }
  const double sd = sigma * lim.eta_norm;
  Index it = 0;
  try {
    rep.lower = solve_truncnorm_location(lim.eta_y, sd, lim.lower, lim.upper, 1.0 - alpha, &it);
    rep.iterations = it;
    rep.upper = side == Side::Two
                    ? solve_truncnorm_location(lim.eta_y, sd, lim.lower, lim.upper, alpha, &it)
                    : kInf;
    rep.iterations += side == Side::Two ? it : 0;
  } catch (const Error&) {
    rep.lower = rep.upper = kNaN;
  }
  if (rep.failed()) rep.flags.emplace_back("ps_no_root");
  return rep;
}

}  // namespace selci
