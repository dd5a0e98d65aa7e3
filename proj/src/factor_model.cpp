#include "selci/factor_model.hpp"

#include "selci/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace selci {

namespace {

constexpr double kProjectionConditionGuard = 1e12;

// Top-k eigenvectors of X'X (p x k, columns ordered by decreasing eigenvalue).
Matrix top_loadings(const Matrix& X, Index k_max, FactorRoute route) {
  const Index n = X.rows();
  const Index p = X.cols();
  const bool use_observations =
      route == FactorRoute::Observations || (route == FactorRoute::Auto && n < p);

  if (!use_observations) {
    Matrix gram = Matrix::Zero(p, p);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    if (eig.info() != Eigen::Success) throw DecompositionError("eigensolver failed on X'X");
    return eig.eigenvectors().rightCols(k_max).rowwise().reverse();
  }

  // XX' u = d u  implies  X'X (X'u) = d (X'u); normalise X'u to unit length.
  Matrix gram = Matrix::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(X);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw DecompositionError("eigensolver failed on XX'");
  const Matrix U = eig.eigenvectors().rightCols(k_max).rowwise().reverse();
  Matrix V = X.transpose() * U;
  for (Index i = 0; i < k_max; ++i) {
    const double norm = V.col(i).norm();
    if (norm > 0.0) V.col(i) /= norm;
  }
  return V;
}

// F_bar (F_bar' F_bar / n)^{-1/2}; returns false when F_bar is rank deficient.
bool rescale_factors(const Matrix& F_bar, Matrix& F_hat) {
  const auto n = static_cast<double>(F_bar.rows());
  const Matrix D = F_bar.transpose() * F_bar / n;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(D);
  if (eig.info() != Eigen::Success) throw DecompositionError("eigensolver failed on F'F");
  const Vector& values = eig.eigenvalues();
  if (values.minCoeff() <= std::numeric_limits<double>::min()) return false;
  const Matrix inv_sqrt =
      eig.eigenvectors() * values.cwiseInverse().cwiseSqrt().asDiagonal() *
      eig.eigenvectors().transpose();
  F_hat = F_bar * inv_sqrt;
  return true;
}

}  // namespace

FactorEstimate estimate_factors(const Matrix& X, Index k_max, FactorRoute route) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (!X.allFinite()) throw NumericInput("estimate_factors: X has non-finite entries");
  if (k_max < 1 || k_max > std::min(n, p)) {
    throw InvalidConfig("estimate_factors: k_max must lie in [1, min(n, p)], got " +
                        std::to_string(k_max));
  }

  const Matrix loadings = std::sqrt(static_cast<double>(p)) * top_loadings(X, k_max, route);
  const double total = X.squaredNorm();
  const double floor = kResidualFloor * std::max(total, std::numeric_limits<double>::min());
  const double np = static_cast<double>(n) * static_cast<double>(p);
  const double penalty = (static_cast<double>(n + p) / np) * std::log(np / static_cast<double>(n + p));

  FactorEstimate out;
  out.ic_values.resize(k_max);
  out.v_values.resize(k_max);
  std::vector<Matrix> factors(static_cast<std::size_t>(k_max));
  double best_ic = std::numeric_limits<double>::infinity();

  for (Index k = 1; k <= k_max; ++k) {
    const Matrix F_bar = X * loadings.leftCols(k) / static_cast<double>(p);
    Matrix F_hat;
    double v = 0.0;
    double ic = std::numeric_limits<double>::infinity();
    if (rescale_factors(F_bar, F_hat)) {
      // Least-squares loadings given F_hat are X'F_hat / n since F_hat'F_hat = nI.
      const Matrix fitted = F_hat * (F_hat.transpose() * X / static_cast<double>(n));
      v = (X - fitted).squaredNorm();
      ic = std::log(std::max(v, floor)) + static_cast<double>(k) * penalty;
    } else {
      v = k > 1 ? out.v_values(k - 2) : total;
    }
    out.v_values(k - 1) = v;
    out.ic_values(k - 1) = ic;
    factors[static_cast<std::size_t>(k - 1)] = std::move(F_hat);
    if (ic < best_ic) {
      best_ic = ic;
      out.k_hat = k;
    }
  }
  if (out.k_hat == 0) throw DecompositionError("estimate_factors: no admissible factor count");
  out.F_hat = std::move(factors[static_cast<std::size_t>(out.k_hat - 1)]);
  return out;
}

Matrix complement_projection(const Matrix& F, const Matrix& A) {
  if (F.cols() == 0) return A;
  if (F.rows() != A.rows()) throw InvalidConfig("complement_projection: row mismatch");
  const Matrix FtF = F.transpose() * F;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(FtF, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kProjectionConditionGuard) {
    throw SingularMatrix("complement_projection: F'F is singular",
                         lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
  }
  return A - F * FtF.llt().solve(F.transpose() * A);
}

}  // namespace selci
