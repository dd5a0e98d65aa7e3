#pragma once

#include "selci/types.hpp"

namespace selci {

/// Coefficients of a fixed column subset J estimated with the factor-projected
/// design as instrument.
struct IvEstimate {
  IndexList J;
  Vector beta_tilde;  ///< (X~'X~)^{-1} X~'Y, ordered as J
  Matrix x_tilde;     ///< (I - P_F) X_J
  Matrix gram;        ///< X~'X~
  Vector residuals;   ///< Y - X_J beta_tilde (unprojected design)
  double condition = 1.0;
};

/// Gram matrices worse conditioned than this are rejected as singular.
inline constexpr double kMaxGramCondition = 1e12;

/// Projects X_J off the span of F_hat (empty F_hat: no projection) and solves the
/// normal equations of Y on the projected design. Throws SingularMatrix when
/// X~'X~ is singular or its condition number exceeds kMaxGramCondition.
[[nodiscard]] IvEstimate iv_estimate(const Matrix& X, const Vector& Y, const IndexList& J,
                                     const Matrix& F_hat);

[[nodiscard]] inline const Vector& residual_vector(const IvEstimate& est) { return est.residuals; }

/// Condition number of a symmetric matrix from its extreme eigenvalues (inf if not PD).
[[nodiscard]] double spd_condition(const Matrix& S);

}  // namespace selci
