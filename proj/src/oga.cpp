#include "selci/oga.hpp"

#include "selci/error.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <string>

namespace selci {

namespace {

struct Candidate {
  double score = -1.0;
  Index index = -1;
};

bool better(const Candidate& a, const Candidate& b) {
  return a.score > b.score || (a.score == b.score && a.index >= 0 && a.index < b.index);
}

// Static scheduling hands each thread an ascending contiguous range, so the
// per-thread strict '>' keeps the lowest index and the merge below applies the
// same rule across threads: the winner does not depend on the thread count.
Candidate scan_parallel(const Matrix& X, const Vector& U, const Vector& inv_norm,
                        const std::vector<char>& blocked) {
  const Index p = X.cols();
  Candidate best;
#pragma omp parallel if (p >= 512)
  {
    Candidate local;
#pragma omp for schedule(static) nowait
    for (Index j = 0; j < p; ++j) {
      if (blocked[static_cast<std::size_t>(j)]) continue;
      const double s = std::abs(X.col(j).dot(U)) * inv_norm(j);
      if (s > local.score) local = {s, j};
    }
#pragma omp critical(selci_oga_scan)
    {
      if (better(local, best)) best = local;
    }
  }
  return best;
}

Candidate scan_serial(const Matrix& X, const Vector& U, const Vector& inv_norm,
                      const std::vector<char>& blocked) {
  Candidate best;
  for (Index j = 0; j < X.cols(); ++j) {
    if (blocked[static_cast<std::size_t>(j)]) continue;
    const double s = std::abs(X.col(j).dot(U)) * inv_norm(j);
    if (s > best.score) best = {s, j};
  }
  return best;
}

Vector scatter_coefficients(const Matrix& R, const Vector& beta_q, const IndexList& order,
                            Index p) {
  Vector beta = Vector::Zero(p);
  if (order.empty()) return beta;
  const Vector local = R.triangularView<Eigen::Upper>().solve(beta_q);
  for (std::size_t k = 0; k < order.size(); ++k) beta(order[k]) = local(static_cast<Index>(k));
  return beta;
}

template <typename Scan>
SelectionResult run_oga(const Matrix& X, const Vector& Y, Index m, Scan scan) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (Y.size() != n) throw InvalidConfig("oga: X rows and Y length differ");
  if (m < 0 || m > std::min(n, p)) {
    throw InvalidConfig("oga: m must lie in [0, min(n, p)], got " + std::to_string(m));
  }

  Vector inv_norm(p);
  std::vector<char> blocked(static_cast<std::size_t>(p), 0);
  for (Index j = 0; j < p; ++j) {
    const double norm = X.col(j).norm();
    inv_norm(j) = norm > 0.0 ? 1.0 / norm : 0.0;
    if (norm == 0.0) blocked[static_cast<std::size_t>(j)] = 1;
  }

  SelectionResult out;
  out.Q.resize(n, m);
  out.R = Matrix::Zero(m, m);
  out.beta_q.resize(m);
  out.residual_norms.resize(m);
  Vector U = Y;
  const double zero_score = kZeroScoreTolerance * Y.norm();

  Index k = 0;
  while (k < m) {
    const Candidate pick = scan(X, U, inv_norm, blocked);
    if (pick.index < 0 || pick.score <= zero_score) {
      out.early_stop = true;
      break;
    }
    const Index j = pick.index;
    blocked[static_cast<std::size_t>(j)] = 1;

    // Classical Gram-Schmidt with one reorthogonalisation pass.
    Vector resid = X.col(j);
    Vector r = Vector::Zero(k);
    if (k > 0) {
      const auto Qk = out.Q.leftCols(k);
      r = Qk.transpose() * resid;
      resid.noalias() -= Qk * r;
      const Vector r2 = Qk.transpose() * resid;
      resid.noalias() -= Qk * r2;
      r += r2;
    }
    const double rkk = resid.norm();
    if (rkk <= kCollinearTolerance / inv_norm(j)) continue;

    out.Q.col(k) = resid / rkk;
    out.R.col(k).head(k) = r;
    out.R(k, k) = rkk;
    const double bq = out.Q.col(k).dot(U);
    U.noalias() -= bq * out.Q.col(k);
    out.beta_q(k) = bq;
    out.residual_norms(k) = U.norm();
    out.j_hat.push_back(j);
    ++k;
  }

  out.m = k;
  if (k < m) {
    out.Q.conservativeResize(n, k);
    out.R.conservativeResize(k, k);
    out.beta_q.conservativeResize(k);
    out.residual_norms.conservativeResize(k);
  }
  out.beta_oga = scatter_coefficients(out.R, out.beta_q, out.j_hat, p);
  return out;
}

}  // namespace

SelectionResult oga(const Matrix& X, const Vector& Y, Index m) {
  return run_oga(X, Y, m, scan_parallel);
}

namespace reference {
SelectionResult oga(const Matrix& X, const Vector& Y, Index m) {
  return run_oga(X, Y, m, scan_serial);
}
}  // namespace reference

Index max_oga_steps(Index n, Index p) {
  const Index cap = std::max<Index>(1, std::min(n / 2, p));
  if (p <= 1) return cap;
  const double k = 2.0 * std::floor(std::sqrt(static_cast<double>(n) / std::log(static_cast<double>(p))));
  return std::clamp<Index>(static_cast<Index>(k), 1, cap);
}

Index hdbic(const Vector& residual_norms, Index n, Index p) {
  const double penalty = std::log(static_cast<double>(n)) * std::log(static_cast<double>(p));
  Index best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (Index k = 1; k <= residual_norms.size(); ++k) {
    const double rn = residual_norms(k - 1);
    if (rn == 0.0) return k;
    const double value = static_cast<double>(n) * std::log(rn * rn) + static_cast<double>(k) * penalty;
    if (value < best_value) {
      best_value = value;
      best = k;
    }
  }
  return best;
}

SelectionResult truncate_path(const SelectionResult& path, Index m) {
  if (m < 0 || m > path.m) throw InvalidConfig("truncate_path: m exceeds path length");
  SelectionResult out;
  out.j_hat.assign(path.j_hat.begin(), path.j_hat.begin() + m);
  out.Q = path.Q.leftCols(m);
  out.R = path.R.topLeftCorner(m, m);
  out.beta_q = path.beta_q.head(m);
  out.residual_norms = path.residual_norms.head(m);
  out.m = m;
  out.early_stop = path.early_stop && m == path.m;
  out.beta_oga = scatter_coefficients(out.R, out.beta_q, out.j_hat, path.beta_oga.size());
  return out;
}

SelectionResult oga_hdbic(const Matrix& X, const Vector& Y) {
  const SelectionResult path = oga(X, Y, max_oga_steps(X.rows(), X.cols()));
  return truncate_path(path, hdbic(path.residual_norms, X.rows(), X.cols()));
}

void oga_gram(const Matrix& G, const Vector& Xty, double yty, Index steps,
              GramOgaWorkspace& ws, GramPath& out) {
  const Index p = G.rows();
  ws.XtQ.resize(p, steps);
  ws.corr = Xty;
  ws.used.assign(static_cast<std::size_t>(p), 0);
  out.order.clear();
  out.beta_q.resize(steps);
  out.residual_norms.resize(steps);

  const double zero_score = kZeroScoreTolerance * std::sqrt(std::max(yty, 0.0));
  const double collinear_sq = kCollinearTolerance * kCollinearTolerance;
  double resid_norm2 = yty;

  Index k = 0;
  while (k < steps) {
    double best = -1.0;
    Index pick = -1;
    for (Index i = 0; i < p; ++i) {
      if (ws.used[static_cast<std::size_t>(i)] || G(i, i) == 0.0) continue;
      const double s = std::abs(ws.corr(i)) / std::sqrt(G(i, i));
      if (s > best) {
        best = s;
        pick = i;
      }
    }
    if (pick < 0 || best <= zero_score) break;
    ws.used[static_cast<std::size_t>(pick)] = 1;

    ws.r = ws.XtQ.row(pick).head(k).transpose();
    const double rkk_sq = G(pick, pick) - ws.r.squaredNorm();
    if (rkk_sq <= collinear_sq * G(pick, pick)) continue;
    const double rkk = std::sqrt(rkk_sq);

    // X'q_k = (G_{:,j} - X'Q r) / r_kk; q_k'U^{(k-1)} = X_j'U^{(k-1)} / r_kk.
    auto xq = ws.XtQ.col(k);
    xq = G.col(pick);
    if (k > 0) xq.noalias() -= ws.XtQ.leftCols(k) * ws.r;
    xq /= rkk;
    const double bq = ws.corr(pick) / rkk;
    ws.corr.noalias() -= bq * xq;
    resid_norm2 -= bq * bq;

    out.order.push_back(pick);
    out.beta_q(k) = bq;
    out.residual_norms(k) = std::sqrt(std::max(resid_norm2, 0.0));
    ++k;
  }
  out.m = k;
  out.beta_q.conservativeResize(k);
  out.residual_norms.conservativeResize(k);
}

}  // namespace selci
