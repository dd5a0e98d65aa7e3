#pragma once

#include "selci/block_bootstrap.hpp"
#include "selci/dgp.hpp"
#include "selci/factor_model.hpp"
#include "selci/rng.hpp"
#include "selci/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace selci {

/// Rows [0, floor(n/2)) and [floor(n/2), n), order preserved. Truth, setting and
/// seed are copied to both halves; noise is split alongside the rows.
[[nodiscard]] std::pair<Dataset, Dataset> split(const Dataset& ds);

/// Estimate of the coefficients of `J` computed on one half of the sample.
struct SideEstimate {
  IndexList J;
  Vector beta;      ///< ordered as J; empty when the estimate failed
  bool ok = true;
  std::string error;
};

/// Cross-fitted estimates. `train_side` is fitted on the first half with the set
/// selected on the second half; `test_side` is fitted on the second half with the
/// set selected on the first.
struct CrossFit {
  IndexList j_train;  ///< OGA + HDBIC on the first half
  IndexList j_test;   ///< OGA + HDBIC on the second half
  SideEstimate train_side;
  SideEstimate test_side;
};

/// How each half chooses its set.
enum class HalfSelection {
  FullSampleSteps,  ///< OGA for as many steps as the full-sample selection took
  Hdbic,            ///< OGA for K_n steps cut by HDBIC on the half itself
};

/// `steps` is the OGA iteration count used with HalfSelection::FullSampleSteps
/// (clamped to the half's dimensions); it is ignored for Hdbic.
[[nodiscard]] CrossFit cross_fit(const Dataset& ds, Index steps,
                                 HalfSelection rule = HalfSelection::FullSampleSteps,
                                 Index k_max = kDefaultKMax);

/// Combined estimate for each j in j_hat:
///   j in both split selections      -> average of the two side estimates,
///   j only in the first-half set    -> estimate fitted on the second half,
///   j only in the second-half set   -> estimate fitted on the first half,
///   otherwise                       -> 0.
/// A side whose fit failed contributes nothing.
[[nodiscard]] Vector combine_beta(const IndexList& j_hat, const CrossFit& cf);

/// How the noise estimate regresses each half of w~ on the common columns.
enum class EpsRegression {
  CrossIndexed,  ///< half h is regressed on the columns selected on the other half
  SameSide,      ///< half h is regressed on the columns selected on half h
};

using BootstrapFn = std::function<Vector(const Vector&, Rng&)>;

struct ResampleOptions {
  Index B = 50;
  std::uint64_t seed = 0;
  Index k_max = kDefaultKMax;
  EpsRegression eps_regression = EpsRegression::CrossIndexed;
  HalfSelection half_selection = HalfSelection::FullSampleSteps;
  /// Replaces double_block_bootstrap when set. Must be safe to call concurrently.
  BootstrapFn bootstrap;
};

struct ResampleDiagnostics {
  IndexList j_train;
  IndexList j_test;
  /// Selections on the augmented design [F_hat, (I - P_F) X_{J+^c}], as column
  /// indices of that design (factors first).
  IndexList jw_train;
  IndexList jw_test;
  IndexList jw;
  bool eps_from_w_tilde = false;  ///< no common columns: eps_hat = w_tilde
  bool degenerate = false;        ///< combined estimate is identically zero
  Index iid_fallbacks = 0;
  std::vector<std::string> notes;
};

struct ResampleSet {
  IndexList j_hat;
  Vector beta_tilde;  ///< combined estimate, ordered as j_hat
  IndexList j_plus;   ///< members of j_hat with a nonzero combined estimate
  Vector w_tilde;     ///< Y - X_{j_hat} beta_tilde
  Vector eps_hat;
  Matrix W;           ///< n x B, column b is w^(b) = w_tilde - eps_hat + eps_hat^(b)
  Matrix eps_boot;    ///< n x B, column b is eps_hat^(b)
  ResampleDiagnostics diagnostics;

  [[nodiscard]] Index B() const { return W.cols(); }
};

/// Builds the combined estimate and B disturbance vectors for resampling.
/// j_hat and F_hat come from the full sample. Bootstrap draw b uses the stream
/// derive_seed(opts.seed, {b}) so the result does not depend on thread count.
/// B = 0 is allowed and produces only the estimate and the noise fit.
[[nodiscard]] ResampleSet generate_w(const Dataset& ds, const IndexList& j_hat,
                                     const Matrix& F_hat, const ResampleOptions& opts);

}  // namespace selci
