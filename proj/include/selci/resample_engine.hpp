#pragma once

#include "selci/oga.hpp"
#include "selci/resampler.hpp"
#include "selci/statistic.hpp"

namespace selci {

/// Evaluates the signed statistic T_j(X, Y^(b)(j, theta), theta) for all B
/// resampled responses
///   Y^(b)(j, theta) = X_J beta~_J + w^(b) + (theta - beta~_j) X_j.
///
/// Every response shares the design, so the constructor precomputes X'X, X'A_b
/// and the factor cross-products once (A_b = X_J beta~_J + w^(b)). Each
/// evaluation then runs OGA in Gram form (O(p K) per step instead of O(n p)),
/// the HDBIC cut, the factor-projected fit and the HAC variance of one
/// coefficient. Resamples are spread over OpenMP threads; each writes its own
/// slot so results do not depend on the thread count.
class ResampleEngine {
 public:
  ResampleEngine(const Matrix& X, const Matrix& F_hat, const ResampleSet& rs,
                 const StatisticConfig& cfg);

  /// Length-B vector of signed statistics. NaN marks a resample in which j was
  /// not selected or the fit on the selected set was singular.
  [[nodiscard]] Vector statistics(Index j, double theta) const;

  /// Combined estimate of coefficient j (0 if j is not in the selected set).
  [[nodiscard]] double beta_tilde(Index j) const;

  [[nodiscard]] Index B() const { return A_.cols(); }
  [[nodiscard]] const Matrix& X() const { return X_; }
  [[nodiscard]] const Matrix& F_hat() const { return F_hat_; }
  [[nodiscard]] const StatisticConfig& config() const { return cfg_; }

 private:
  double evaluate(Index b, Index j, double d, double theta, GramOgaWorkspace& ws,
                  GramPath& path) const;

  const Matrix& X_;
  Matrix F_hat_;
  StatisticConfig cfg_;
  IndexList j_hat_;
  Vector beta_;
  Index steps_ = 0;
  Matrix G_;        // X'X
  Matrix FtX_;      // F'X
  Matrix FtF_inv_;  // (F'F)^{-1}
  Matrix A_;        // n x B
  Matrix XtA_;      // p x B
  Matrix FtA_;      // k x B
  Vector AtA_;      // ||A_b||^2
};

namespace reference {
/// Same quantity as ResampleEngine::statistics(), computed by forming each
/// response explicitly and calling test_statistic_detail(). Serial.
[[nodiscard]] Vector resample_statistics(const Matrix& X, const Matrix& F_hat,
                                         const ResampleSet& rs, const StatisticConfig& cfg,
                                         Index j, double theta);
}  // namespace reference

}  // namespace selci
