#include "selci/hybrid.hpp"

#include "selci/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace selci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void add_flag(IntervalReport& rep, const char* flag) {
  if (std::find(rep.flags.begin(), rep.flags.end(), flag) == rep.flags.end()) rep.flags.emplace_back(flag);
}

struct Quantiles {
  double low = 0.0;
  double high = 0.0;
};

// u_alpha and u_{1-alpha} at theta, falling back to normal quantiles when too
// few resamples select j.
Quantiles quantiles_at(const ResampleEngine& engine, Index j, double theta, double alpha,
                       const HybridConfig& cfg, IntervalReport& rep) {
  const Vector t = engine.statistics(j, theta);
  Index count = 0;
  Quantiles q;
  q.high = conditioned_quantile(t, 1.0 - alpha, &count);
  q.low = conditioned_quantile(t, alpha);
  rep.resamples_used = rep.iterations == 0 ? count : std::min(rep.resamples_used, count);
  ++rep.iterations;
  if (count < cfg.min_conditioned) {
    add_flag(rep, "hr_normal_fallback");
    q.high = normal_quantile(1.0 - alpha);
    q.low = -q.high;
  }
  return q;
}

void check_inputs(const FixedSetStatistic& observed, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidConfig("hybrid_ci: alpha must lie in (0, 0.5)");
  if (!(observed.sigma > 0.0)) throw InvalidConfig("hybrid_ci: sigma_j must be positive");
}

}  // namespace

double conditioned_quantile(const Vector& values, double level, Index* count) {
  std::vector<double> finite;
  finite.reserve(static_cast<std::size_t>(values.size()));
  for (Index b = 0; b < values.size(); ++b) {
    if (std::isfinite(values(b))) finite.push_back(values(b));
  }
  if (count != nullptr) *count = static_cast<Index>(finite.size());
  if (finite.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto N = static_cast<double>(finite.size());
  auto rank = static_cast<std::size_t>(std::ceil(level * N - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, finite.size());
  std::nth_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(rank - 1), finite.end());
  return finite[rank - 1];
}

Crossing find_lower_crossing(const std::function<double(double)>& g, double start, double step,
                             const HybridConfig& cfg) {
  Crossing c;
  double a = start;
  if (!(g(a) > 0.0)) {
    c.start_ok = false;
    for (Index h = 0; h < cfg.max_search_steps && !c.start_ok; ++h) {
      a += 0.5 * step;
      c.start_ok = g(a) > 0.0;
    }
  }
  double r = std::min(start, a) - 2.0 * step;
  c.bracketed = g(r) < 0.0;
  for (Index h = 0; h < cfg.max_search_steps && !c.bracketed; ++h) {
    r -= 0.5 * step;
    c.bracketed = g(r) < 0.0;
  }
  if (!c.bracketed) {
    c.converged = false;
    c.root = r;
    return c;
  }
  const double delta = cfg.delta_scale * step;
  while (a - r >= delta && c.bisections < cfg.max_bisections) {
    const double mid = 0.5 * (a + r);
    (g(mid) > 0.0 ? a : r) = mid;
    ++c.bisections;
  }
  c.converged = a - r < delta;
  c.root = 0.5 * (a + r);
  return c;
}

IntervalReport hybrid_ci_one_sided(const ResampleEngine& engine, const FixedSetStatistic& observed,
                                   Index j, double alpha, const HybridConfig& cfg) {
  check_inputs(observed, alpha);
  IntervalReport rep;
  rep.j = j;
  rep.method = Method::Hr;
  rep.alpha = alpha;
  rep.side = Side::One;
  rep.estimate = engine.beta_tilde(j);
  rep.upper = kInf;

  auto g = [&](double theta) {
    return quantiles_at(engine, j, theta, alpha, cfg, rep).high - observed.at(theta);
  };
  const Crossing c = find_lower_crossing(g, engine.beta_tilde(j), observed.sigma, cfg);
  if (!c.start_ok) add_flag(rep, "hr_upper_start_capped");
  if (!c.bracketed || !c.converged) add_flag(rep, "hr_not_converged");
  rep.lower = c.root;
  return rep;
}

IntervalReport hybrid_ci_two_sided(const ResampleEngine& engine, const FixedSetStatistic& observed,
                                   Index j, double alpha, const HybridConfig& cfg) {
  check_inputs(observed, alpha);
  if (cfg.grid_points < 2) throw InvalidConfig("hybrid_ci_two_sided: need at least 2 grid points");
  IntervalReport rep;
  rep.j = j;
  rep.method = Method::Hr;
  rep.alpha = alpha;
  rep.side = Side::Two;
  const double centre = engine.beta_tilde(j);
  rep.estimate = centre;

  auto inside = [&](double theta) {
    const Quantiles q = quantiles_at(engine, j, theta, alpha, cfg, rep);
    const double t = observed.at(theta);
    return q.low < t && t < q.high;
  };

  const double span = cfg.grid_halfwidth * observed.sigma;
  const double step = 2.0 * span / static_cast<double>(cfg.grid_points - 1);
  std::vector<char> in(static_cast<std::size_t>(cfg.grid_points));
  for (Index i = 0; i < cfg.grid_points; ++i) {
    in[static_cast<std::size_t>(i)] = inside(centre - span + static_cast<double>(i) * step) ? 1 : 0;
  }
  const auto first = std::find(in.begin(), in.end(), 1);
  if (first == in.end()) {
    add_flag(rep, "hr_empty_region");
    rep.lower = rep.upper = centre;
    return rep;
  }
  const auto lo_i = static_cast<Index>(first - in.begin());
  const auto hi_i = static_cast<Index>(in.rend() - std::find(in.rbegin(), in.rend(), 1)) - 1;
  rep.lower = centre - span + static_cast<double>(lo_i) * step;
  rep.upper = centre - span + static_cast<double>(hi_i) * step;

  if (lo_i == 0 || hi_i == cfg.grid_points - 1) add_flag(rep, "hr_grid_edge");
  if (lo_i > 0 && inside(rep.lower - 0.5 * step)) rep.lower -= 0.5 * step;
  if (hi_i < cfg.grid_points - 1 && inside(rep.upper + 0.5 * step)) rep.upper += 0.5 * step;
  return rep;
}

IntervalReport hybrid_ci(const Dataset& ds, Index j, const ResampleSet& rs, double alpha, Side side,
                         const StatisticConfig& stat_cfg, const HybridConfig& cfg) {
  if (!contains(rs.j_hat, j)) throw InvalidConfig("hybrid_ci: j is not in the selected set");
  const Index kk = std::min<Index>(stat_cfg.k_max, std::min(ds.n(), ds.p()));
  const Matrix F_hat = estimate_factors(ds.X, kk).F_hat;
  const ResampleEngine engine(ds.X, F_hat, rs, stat_cfg);
  const FixedSetStatistic observed =
      fixed_set_statistic(ds.X, ds.Y, rs.j_hat, j, F_hat, stat_cfg.mode, stat_cfg.q);
  return side == Side::One ? hybrid_ci_one_sided(engine, observed, j, alpha, cfg)
                           : hybrid_ci_two_sided(engine, observed, j, alpha, cfg);
}

}  // namespace selci
