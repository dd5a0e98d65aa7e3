#pragma once

#include "selci/interval.hpp"
#include "selci/resample_engine.hpp"

#include <functional>

namespace selci {

struct HybridConfig {
  Index max_bisections = 60;
  Index max_search_steps = 40;
  double delta_scale = 1e-3;   ///< bisection stops once a - r < delta_scale * sigma_j
  Index grid_points = 81;
  double grid_halfwidth = 4.0;  ///< grid spans beta~_j -+ grid_halfwidth * sigma_j
  /// Resamples selecting j needed before their quantile is used; with fewer, the
  /// normal quantile stands in and the report is flagged.
  Index min_conditioned = 1;
};

/// Order statistic number ceil(level * N) (1-based, at least 1) of the finite
/// entries of `values`. NaN if there are none.
[[nodiscard]] double conditioned_quantile(const Vector& values, double level, Index* count = nullptr);

/// Outcome of the crossing search used by the one-sided interval.
struct Crossing {
  double root = 0.0;
  Index bisections = 0;
  bool bracketed = true;  ///< a point with g < 0 was found below the start
  bool start_ok = true;   ///< a point with g > 0 was found at or above the start
  bool converged = true;  ///< final bracket narrower than delta
};

/// Locates the lower crossing of g: finds a >= start with g(a) > 0 (stepping up
/// by step/2), then r <= start - 2 step with g(r) < 0 (stepping down by step/2),
/// then bisects [r, a] until it is narrower than cfg.delta_scale * step.
[[nodiscard]] Crossing find_lower_crossing(const std::function<double(double)>& g, double start,
                                           double step, const HybridConfig& cfg);

/// One-sided interval (theta_l, +inf). Writing g(theta) = u_{1-alpha}(theta) - T(theta)
/// with u the resampled quantile over resamples that select j and T the
/// observed statistic, the search starts at a = beta~_j (g > 0), steps down
/// from a - 2 sigma_j by sigma_j / 2 until g < 0, then bisects.
[[nodiscard]] IntervalReport hybrid_ci_one_sided(const ResampleEngine& engine,
                                                 const FixedSetStatistic& observed, Index j,
                                                 double alpha, const HybridConfig& cfg = {});

/// Two-sided interval from the region {theta : u_alpha(theta) < T(theta) < u_{1-alpha}(theta)}
/// of the signed statistic, scanned on a grid with one refinement pass at each
/// end. An empty region collapses to the point beta~_j and is flagged.
[[nodiscard]] IntervalReport hybrid_ci_two_sided(const ResampleEngine& engine,
                                                 const FixedSetStatistic& observed, Index j,
                                                 double alpha, const HybridConfig& cfg = {});

/// Convenience wrapper: estimates F_hat from ds.X, builds the engine from `rs`
/// and fits the observed statistic on rs.j_hat.
[[nodiscard]] IntervalReport hybrid_ci(const Dataset& ds, Index j, const ResampleSet& rs,
                                       double alpha, Side side, const StatisticConfig& stat_cfg = {},
                                       const HybridConfig& cfg = {});

}  // namespace selci
