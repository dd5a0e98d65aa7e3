#include "selci/polytope.hpp"

#include "selci/error.hpp"

#include <cmath>
#include <limits>

namespace selci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector inverse_norms(const Matrix& X) {
  Vector inv(X.cols());
  for (Index i = 0; i < X.cols(); ++i) {
    const double nrm = X.col(i).norm();
    inv(i) = nrm > 0.0 ? 1.0 / nrm : 0.0;
  }
  return inv;
}

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Folds the constraint c0 + c1 t <= 0 into [lo, up].
void fold(double c0, double c1, TruncationLimits& lim) {
  if (c1 > 0.0) {
    lim.upper = std::min(lim.upper, -c0 / c1);
  } else if (c1 < 0.0) {
    lim.lower = std::max(lim.lower, -c0 / c1);
  } else if (c0 > 0.0) {
    lim.feasible = false;
  }
}

void finish(TruncationLimits& lim) {
  if (!lim.feasible) return;
  if (lim.lower < lim.upper && lim.lower <= lim.eta_y && lim.eta_y <= lim.upper) return;
  // Roundoff can push the observed point just outside its own polytope.
  const double scale = std::max({1.0, std::abs(lim.eta_y), std::isfinite(lim.lower) ? std::abs(lim.lower) : 0.0,
                                 std::isfinite(lim.upper) ? std::abs(lim.upper) : 0.0});
  const double margin = 1e3 * std::numeric_limits<double>::epsilon() * scale;
  lim.lower -= margin;
  lim.upper += margin;
  lim.widened = true;
  if (!(lim.lower < lim.upper && lim.lower <= lim.eta_y && lim.eta_y <= lim.upper)) {
    lim.feasible = false;
  }
}

TruncationLimits start_limits(const Vector& Y, const Vector& eta) {
  TruncationLimits lim;
  lim.lower = -kInf;
  lim.upper = kInf;
  lim.eta_y = eta.dot(Y);
  lim.eta_norm = eta.norm();
  if (!(lim.eta_norm > 0.0)) throw InvalidConfig("truncation_limits: eta must be nonzero");
  return lim;
}

}  // namespace

Polytope selection_polytope(const Matrix& X, const SelectionResult& sel) {
  const Index n = X.rows();
  const Index p = X.cols();
  const Vector inv = inverse_norms(X);
  std::vector<Vector> rows;
  std::vector<char> used(static_cast<std::size_t>(p), 0);
  for (Index k = 0; k < sel.m; ++k) {
    const Index jk = sel.j_hat[static_cast<std::size_t>(k)];
    used[static_cast<std::size_t>(jk)] = 1;
    const auto Qk = sel.Q.leftCols(k);
    // Row i of C is a_i(.) as a linear functional: X_i' P / ||X_i||.
    Matrix C = X.transpose();
    if (k > 0) C -= (X.transpose() * Qk) * Qk.transpose();
    C = inv.asDiagonal() * C;
    const double s = sign_of(sel.beta_q(k));
    const Vector winner = s * C.row(jk).transpose();
    for (Index i = 0; i < p; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      rows.emplace_back(C.row(i).transpose() - winner);
      rows.emplace_back(-C.row(i).transpose() - winner);
    }
  }
  Polytope poly;
  poly.A.resize(static_cast<Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) poly.A.row(static_cast<Index>(r)) = rows[r].transpose();
  poly.b = Vector::Zero(static_cast<Index>(rows.size()));
  return poly;
}

TruncationLimits truncation_limits(const Polytope& poly, const Vector& Y, const Vector& eta) {
  TruncationLimits lim = start_limits(Y, eta);
  const Vector c = eta / (lim.eta_norm * lim.eta_norm);
  const Vector z = Y - c * lim.eta_y;
  const Vector Az = poly.A * z;
  const Vector Ac = poly.A * c;
  for (Index r = 0; r < poly.A.rows(); ++r) fold(Az(r) - poly.b(r), Ac(r), lim);
  finish(lim);
  return lim;
}

TruncationLimits truncation_limits(const Matrix& X, const SelectionResult& sel, const Vector& Y,
                                   const Vector& eta) {
  TruncationLimits lim = start_limits(Y, eta);
  const Index p = X.cols();
  const Vector inv = inverse_norms(X);
  const Vector c = eta / (lim.eta_norm * lim.eta_norm);
  Vector z = Y - c * lim.eta_y;
  Vector cr = c;
  std::vector<char> used(static_cast<std::size_t>(p), 0);
  for (Index k = 0; k < sel.m; ++k) {
    if (k > 0) {
      const auto q = sel.Q.col(k - 1);
      z -= q * q.dot(z);
      cr -= q * q.dot(cr);
    }
    const Index jk = sel.j_hat[static_cast<std::size_t>(k)];
    used[static_cast<std::size_t>(jk)] = 1;
    const Vector az = (X.transpose() * z).cwiseProduct(inv);
    const Vector ac = (X.transpose() * cr).cwiseProduct(inv);
    const double s = sign_of(sel.beta_q(k));
    const double wz = s * az(jk);
    const double wc = s * ac(jk);
    for (Index i = 0; i < p; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      fold(az(i) - wz, ac(i) - wc, lim);
      fold(-az(i) - wz, -ac(i) - wc, lim);
    }
  }
  finish(lim);
  return lim;
}

Vector ols_contrast(const SelectionResult& sel, Index j) {
  const Index pos = position_of(sel.j_hat, j);
  if (pos < 0) throw InvalidConfig("ols_contrast: column not selected");
  const Vector r = sel.R.triangularView<Eigen::Upper>().transpose().solve(Vector::Unit(sel.m, pos));
  return sel.Q * r;
}

}  // namespace selci
