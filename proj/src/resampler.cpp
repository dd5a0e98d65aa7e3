#include "selci/resampler.hpp"

#include "selci/error.hpp"
#include "selci/iv_estimator.hpp"
#include "selci/oga.hpp"

#include <algorithm>

namespace selci {

namespace {

Dataset take_rows(const Dataset& ds, Index start, Index count) {
  Dataset out;
  out.X = ds.X.middleRows(start, count);
  out.Y = ds.Y.segment(start, count);
  out.truth = ds.truth;
  out.setting = ds.setting;
  out.seed = ds.seed;
  if (ds.noise.size() == ds.n()) out.noise = ds.noise.segment(start, count);
  return out;
}

SideEstimate fit_side(const Dataset& half, const IndexList& J, Index k_max) {
  SideEstimate side;
  side.J = J;
  if (J.empty()) {
    side.beta.resize(0);
    return side;
  }
  try {
    const Index kk = std::min<Index>(k_max, std::min(half.n(), half.p()));
    const FactorEstimate factors = estimate_factors(half.X, kk);
    side.beta = iv_estimate(half.X, half.Y, J, factors.F_hat).beta_tilde;
  } catch (const Error& e) {
    side.ok = false;
    side.error = e.what();
    side.beta.resize(0);
  }
  return side;
}

// OLS of y on the given columns; rank-deficient designs get the minimum-norm
// basic solution from column-pivoted QR.
Vector ols(const Matrix& X, const Vector& y) {
  if (X.cols() == 0) return Vector(0);
  return X.colPivHouseholderQr().solve(y);
}

// eps_half = w_half - X_half[:, jw] * (sub-vector for jw of the OLS of w_half on X_half[:, fit_cols]).
Vector half_noise(const Matrix& XF_half, const Vector& w_half, const IndexList& fit_cols,
                  const IndexList& jw) {
  const Vector coef = ols(select_columns(XF_half, fit_cols), w_half);
  Vector eps = w_half;
  for (const Index col : jw) {
    const Index pos = position_of(fit_cols, col);
    eps.noalias() -= coef(pos) * XF_half.col(col);
  }
  return eps;
}

IndexList select_half(const Dataset& half, Index steps, HalfSelection rule) {
  if (rule == HalfSelection::Hdbic) return oga_hdbic(half.X, half.Y).j_hat;
  return oga(half.X, half.Y, std::clamp<Index>(steps, 0, std::min(half.n(), half.p()))).j_hat;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& ds) {
  const Index n = ds.n();
  const Index half = n / 2;
  return {take_rows(ds, 0, half), take_rows(ds, half, n - half)};
}

CrossFit cross_fit(const Dataset& ds, Index steps, HalfSelection rule, Index k_max) {
  const auto [train, test] = split(ds);
  CrossFit cf;
  cf.j_train = select_half(train, steps, rule);
  cf.j_test = select_half(test, steps, rule);
  cf.train_side = fit_side(train, cf.j_test, k_max);
  cf.test_side = fit_side(test, cf.j_train, k_max);
  return cf;
}

Vector combine_beta(const IndexList& j_hat, const CrossFit& cf) {
  Vector beta = Vector::Zero(static_cast<Index>(j_hat.size()));
  for (std::size_t i = 0; i < j_hat.size(); ++i) {
    const Index j = j_hat[i];
    // test_side was fitted on the set selected from the first half and vice versa.
    const Index pos_test = cf.test_side.ok ? position_of(cf.test_side.J, j) : -1;
    const Index pos_train = cf.train_side.ok ? position_of(cf.train_side.J, j) : -1;
    const auto k = static_cast<Index>(i);
    if (pos_test >= 0 && pos_train >= 0) {
      beta(k) = 0.5 * (cf.train_side.beta(pos_train) + cf.test_side.beta(pos_test));
    } else if (pos_test >= 0) {
      beta(k) = cf.test_side.beta(pos_test);
    } else if (pos_train >= 0) {
      beta(k) = cf.train_side.beta(pos_train);
    }
  }
  return beta;
}

ResampleSet generate_w(const Dataset& ds, const IndexList& j_hat, const Matrix& F_hat,
                       const ResampleOptions& opts) {
  validate(ds);
  if (opts.B < 0) throw InvalidConfig("generate_w: B must be nonnegative");
  if (ds.n() < 8) throw InvalidConfig("generate_w: need n >= 8");
  const Index n = ds.n();

  ResampleSet rs;
  auto& diag = rs.diagnostics;
  rs.j_hat = j_hat;

  const CrossFit cf =
      cross_fit(ds, static_cast<Index>(j_hat.size()), opts.half_selection, opts.k_max);
  diag.j_train = cf.j_train;
  diag.j_test = cf.j_test;
  if (!cf.train_side.ok) diag.notes.push_back("first-half fit failed: " + cf.train_side.error);
  if (!cf.test_side.ok) diag.notes.push_back("second-half fit failed: " + cf.test_side.error);
  rs.beta_tilde = combine_beta(j_hat, cf);
  for (std::size_t i = 0; i < j_hat.size(); ++i) {
    if (rs.beta_tilde(static_cast<Index>(i)) != 0.0) rs.j_plus.push_back(j_hat[i]);
  }
  diag.degenerate = rs.j_plus.empty();

  rs.w_tilde = ds.Y;
  for (std::size_t i = 0; i < j_hat.size(); ++i) {
    rs.w_tilde.noalias() -= rs.beta_tilde(static_cast<Index>(i)) * ds.X.col(j_hat[i]);
  }

  // Augmented design [F_hat, (I - P_F) X_{J+^c}].
  IndexList complement;
  for (Index j = 0; j < ds.p(); ++j) {
    if (!contains(rs.j_plus, j)) complement.push_back(j);
  }
  const Index kf = F_hat.cols();
  Matrix XF(n, kf + static_cast<Index>(complement.size()));
  if (kf > 0) XF.leftCols(kf) = F_hat;
  XF.rightCols(static_cast<Index>(complement.size())) =
      complement_projection(F_hat, select_columns(ds.X, complement));

  const Index half = n / 2;
  const Matrix XF_train = XF.topRows(half);
  const Matrix XF_test = XF.bottomRows(n - half);
  const Vector w_train = rs.w_tilde.head(half);
  const Vector w_test = rs.w_tilde.tail(n - half);
  diag.jw_train = oga_hdbic(XF_train, w_train).j_hat;
  diag.jw_test = oga_hdbic(XF_test, w_test).j_hat;
  diag.jw = intersect(diag.jw_train, diag.jw_test);

  if (diag.jw.empty()) {
    diag.eps_from_w_tilde = true;
    rs.eps_hat = rs.w_tilde;
  } else {
    const bool cross = opts.eps_regression == EpsRegression::CrossIndexed;
    rs.eps_hat.resize(n);
    rs.eps_hat.head(half) =
        half_noise(XF_train, w_train, cross ? diag.jw_test : diag.jw_train, diag.jw);
    rs.eps_hat.tail(n - half) =
        half_noise(XF_test, w_test, cross ? diag.jw_train : diag.jw_test, diag.jw);
  }

  const Index B = opts.B;
  rs.eps_boot.resize(n, B);
  rs.W.resize(n, B);
  const Vector base = rs.w_tilde - rs.eps_hat;
  Index fallbacks = 0;
#pragma omp parallel for schedule(static) reduction(+ : fallbacks) if (B > 1)
  for (Index b = 0; b < B; ++b) {
    Rng rng = make_rng(opts.seed, {static_cast<std::uint64_t>(b)});
    if (opts.bootstrap) {
      rs.eps_boot.col(b) = opts.bootstrap(rs.eps_hat, rng);
    } else {
      BootstrapDiagnostics bd;
      rs.eps_boot.col(b) = double_block_bootstrap(rs.eps_hat, rng, &bd);
      if (bd.iid_fallback) ++fallbacks;
    }
    rs.W.col(b) = base + rs.eps_boot.col(b);
  }
  diag.iid_fallbacks = fallbacks;
  return rs;
}

}  // namespace selci
