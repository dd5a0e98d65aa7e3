#pragma once

#include "selci/types.hpp"

namespace selci {

/// Path of the orthogonal greedy algorithm with its incremental QR factors.
struct SelectionResult {
  IndexList j_hat;        ///< selected columns in selection order
  Matrix Q;               ///< n x m, orthonormal columns
  Matrix R;               ///< m x m upper triangular, X_{j_hat} = Q R
  Vector beta_q;          ///< q_k' U^{(k-1)}
  Vector beta_oga;        ///< length p, zero outside j_hat
  Vector residual_norms;  ///< ||U^{(k)}||, k = 1..m
  Index m = 0;            ///< iterations actually performed
  bool early_stop = false;
};

/// A candidate whose residualised norm falls below this fraction of its raw
/// norm is treated as collinear with the current selection and skipped.
inline constexpr double kCollinearTolerance = 1e-6;
/// The path stops once the best normalised correlation is below this fraction of ||Y||.
inline constexpr double kZeroScoreTolerance = 1e-12;

/// Runs m steps of OGA. At each step picks the unselected column maximising
/// |X_j' U| / ||X_j|| (lowest index on ties), extends the QR factorisation by
/// one column and removes the new direction from the residual. Zero columns
/// are never picked; when no candidate carries signal the path stops early and
/// `m` records the steps taken. The candidate scan runs in parallel.
[[nodiscard]] SelectionResult oga(const Matrix& X, const Vector& Y, Index m);

namespace reference {
/// Serial version of oga() with an identical result; kept for tests and benchmarks.
[[nodiscard]] SelectionResult oga(const Matrix& X, const Vector& Y, Index m);
}  // namespace reference

/// K_n = 2 floor(sqrt(n / log p)), capped at min(n/2, p) and at least 1.
[[nodiscard]] Index max_oga_steps(Index n, Index p);

/// argmin_{1<=k<=K} n log ||U^{(k)}||^2 + k log(n) log(p). A zero residual wins
/// outright; ties go to the smallest k. Returns 0 for an empty path.
[[nodiscard]] Index hdbic(const Vector& residual_norms, Index n, Index p);

/// First `m` steps of a longer path, with coefficients refitted by back-substitution.
[[nodiscard]] SelectionResult truncate_path(const SelectionResult& path, Index m);

/// K_n OGA iterations followed by the HDBIC choice of m.
[[nodiscard]] SelectionResult oga_hdbic(const Matrix& X, const Vector& Y);

/// Reusable scratch space for oga_gram().
struct GramOgaWorkspace {
  Matrix XtQ;         // p x steps, X' q_k
  Vector corr;        // X' U^{(k)}
  Vector r;
  std::vector<char> used;
};

struct GramPath {
  IndexList order;
  Vector beta_q;
  Vector residual_norms;
  Index m = 0;
};

/// OGA driven only by the Gram matrix G = X'X, X'Y and ||Y||^2. Produces the
/// same selection order and residual norms as oga() but costs O(p k) per step
/// instead of O(n p); used when many responses share one design.
void oga_gram(const Matrix& G, const Vector& Xty, double yty, Index steps,
              GramOgaWorkspace& ws, GramPath& out);

}  // namespace selci
