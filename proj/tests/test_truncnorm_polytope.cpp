#include "helpers.hpp"
#include "oga_oracle.hpp"
#include "selci/baselines.hpp"
#include "selci/error.hpp"
#include "selci/oga.hpp"
#include "selci/polytope.hpp"
#include "selci/truncnorm.hpp"

#include <doctest.h>

#include <boost/math/distributions/normal.hpp>

#include <limits>

using namespace selci;
using namespace selci::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double phi_cdf(double z) { return boost::math::cdf(boost::math::normal(), z); }

}  // namespace

TEST_SUITE("polytope") {
  TEST_CASE("truncated normal CDF reference values") {
    CHECK(truncnorm_cdf(1.0, 0.0, 1.0, 0.0, kInf) == doctest::Approx(0.682689492137).epsilon(1e-10));
    for (const double x : {-2.0, -0.3, 0.0, 1.7}) {
      CHECK(truncnorm_cdf(x, 0.0, 1.0, -kInf, kInf) == doctest::Approx(phi_cdf(x)).epsilon(1e-12));
    }
    CHECK(truncnorm_cdf(-1.0, 0.5, 2.0, -1.0, 3.0) == 0.0);
    CHECK(truncnorm_cdf(3.0, 0.5, 2.0, -1.0, 3.0) == 1.0);
    CHECK(truncnorm_cdf(-5.0, 0.5, 2.0, -1.0, 3.0) == 0.0);
    CHECK(truncnorm_cdf(7.0, 0.5, 2.0, -1.0, 3.0) == 1.0);
    const double direct = (phi_cdf(0.4) - phi_cdf(-0.5)) / (phi_cdf(1.0) - phi_cdf(-0.5));
    CHECK(truncnorm_cdf(0.4, 0.0, 1.0, -0.5, 1.0) == doctest::Approx(direct).epsilon(1e-12));
  }

  TEST_CASE("far-tail truncation stays finite and ordered") {
    // Interval 40 to 60 standard deviations above the mean: direct ratios are 0/0.
    const double lo = truncnorm_cdf(40.01, 0.0, 1.0, 40.0, 60.0);
    const double hi = truncnorm_cdf(40.5, 0.0, 1.0, 40.0, 60.0);
    CHECK(std::isfinite(lo));
    CHECK(lo > 0.0);
    CHECK(lo < hi);
    CHECK(hi < 1.0);
    auto log_asymptotic_sf = [](double z) {  // log Q(z) up to the common term -log sqrt(2 pi)
      return -0.5 * z * z - std::log(z) + std::log(1.0 - 1.0 / (z * z) + 3.0 / std::pow(z, 4) - 15.0 / std::pow(z, 6));
    };
    const double ratio = std::exp(log_asymptotic_sf(40.01) - log_asymptotic_sf(40.0));
    CHECK(lo == doctest::Approx(1.0 - ratio).epsilon(1e-9));
    const double mirror = truncnorm_cdf(-40.01, 0.0, 1.0, -60.0, -40.0);
    CHECK(mirror == doctest::Approx(ratio).epsilon(1e-9));
    CHECK(log_normal_sf(50.0) == doctest::Approx(-1254.8313611).epsilon(1e-8));
    CHECK(log_normal_cdf(-50.0) == doctest::Approx(log_normal_sf(50.0)));
  }

  TEST_CASE("monotone in x and strictly decreasing in mu") {
    Rng rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double a = u(rng);
      const double b = a + 0.1 + std::abs(u(rng));
      const double mu = 4.0 * u(rng);
      const double sd = 0.2 + std::abs(u(rng));
      double prev = 0.0;
      for (int i = 0; i <= 20; ++i) {
        const double x = a + (b - a) * i / 20.0;
        const double f = truncnorm_cdf(x, mu, sd, a, b);
        CHECK(f >= prev);
        prev = f;
      }
      const double x = 0.5 * (a + b);
      const double f = truncnorm_cdf(x, mu, sd, a, b);
      const double shifted = truncnorm_cdf(x, mu + 0.05, sd, a, b);
      CHECK(f >= shifted);
      // Strictly smaller wherever the value has not rounded to exactly 0 or 1.
      if (f > 1e-12 && f < 1.0 - 1e-12) CHECK(f > shifted);
    }
  }

  TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS((void)truncnorm_cdf(0.0, 0.0, 1.0, 1.0, 1.0), InvalidTruncation);
    CHECK_THROWS_AS((void)truncnorm_cdf(0.0, 0.0, 1.0, 2.0, 1.0), InvalidTruncation);
    CHECK_THROWS_AS((void)truncnorm_cdf(0.0, 0.0, 0.0, 0.0, 1.0), InvalidConfig);
    CHECK_THROWS_AS((void)truncnorm_cdf(std::nan(""), 0.0, 1.0, 0.0, 1.0), NumericInput);
  }

  TEST_CASE("location solver hits the target") {
    Rng rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
      const double a = u(rng) - 1.0;
      const double b = trial % 3 == 0 ? kInf : a + 0.5 + std::abs(u(rng));
      const double x = std::isinf(b) ? a + std::abs(u(rng)) + 0.01 : a + (b - a) * (0.05 + 0.9 * std::abs(u(rng)) / 2.0);
      const double sd = 0.3 + std::abs(u(rng));
      for (const double target : {0.8, 0.9, 0.2}) {
        const double delta = solve_truncnorm_location(x, sd, a, b, target);
        REQUIRE(std::isfinite(delta));
        CHECK(std::abs(truncnorm_cdf(x, delta, sd, a, b) - target) < 1e-6);
      }
    }
  }

  TEST_CASE("explicit and implicit truncation limits agree") {
    Rng rng(3);
    for (int inst = 0; inst < 50; ++inst) {
      const Matrix X = gaussian_matrix(25, 8, rng);
      const Vector Y = 1.5 * X.col(inst % 8) + gaussian_vector(25, rng);
      const SelectionResult sel = oga(X, Y, 3);
      const Polytope poly = selection_polytope(X, sel);
      CHECK(poly.A.rows() == 2 * (7 + 6 + 5));
      CHECK(((poly.A * Y - poly.b).array() <= 1e-12).all());
      for (const Index j : sel.j_hat) {
        const Vector eta = ols_contrast(sel, j);
        const TruncationLimits e = truncation_limits(poly, Y, eta);
        const TruncationLimits i = truncation_limits(X, sel, Y, eta);
        CHECK(e.feasible);
        CHECK(i.feasible);
        for (const auto& [x, y] : {std::pair{e.lower, i.lower}, std::pair{e.upper, i.upper}}) {
          if (std::isinf(x) || std::isinf(y)) {
            CHECK(x == y);
          } else {
            CHECK(x == doctest::Approx(y).epsilon(1e-9));
          }
        }
        CHECK(e.lower <= e.eta_y);
        CHECK(e.eta_y <= e.upper);
      }
    }
  }

  TEST_CASE("contrast reproduces the least-squares coefficient") {
    Rng rng(4);
    const Matrix X = gaussian_matrix(30, 10, rng);
    const Vector Y = gaussian_vector(30, rng);
    const SelectionResult sel = oga(X, Y, 4);
    const Matrix XJ = select_columns(X, sel.j_hat);
    const Vector ols = XJ.householderQr().solve(Y);
    for (std::size_t k = 0; k < sel.j_hat.size(); ++k) {
      CHECK(ols_contrast(sel, sel.j_hat[k]).dot(Y) == doctest::Approx(ols(static_cast<Index>(k))));
    }
  }

  TEST_CASE("points inside the polytope reproduce the selection, points outside do not") {
    Rng rng(5);
    std::normal_distribution<double> z(0.0, 1.0);
    Index inside = 0;
    Index outside = 0;
    for (int inst = 0; inst < 20; ++inst) {
      const Matrix X = gaussian_matrix(25, 8, rng);
      const Vector Y = X.col(2) - 0.7 * X.col(5) + gaussian_vector(25, rng);
      const SelectionResult sel = oga(X, Y, 3);
      const Polytope poly = selection_polytope(X, sel);
      for (int trial = 0; trial < 300; ++trial) {
        const double scale = 0.05 * (1 + trial % 10);
        const Vector Yp = Y + scale * gaussian_vector(25, rng);
        const bool in = ((poly.A * Yp - poly.b).array() <= 0.0).all();
        const bool same = same_path(oga(X, Yp, 3), sel);
        CHECK(in == same);
        (in ? inside : outside) += 1;
      }
    }
    CHECK(inside > 100);
    CHECK(outside > 100);
  }

  TEST_CASE("a single column without competitors has no truncation") {
    Rng rng(6);
    const Matrix X = gaussian_matrix(20, 1, rng);
    const Vector Y = 0.4 * X.col(0) + gaussian_vector(20, rng);
    const SelectionResult sel = oga(X, Y, 1);
    CHECK(selection_polytope(X, sel).A.rows() == 0);
    const TruncationLimits lim = truncation_limits(X, sel, Y, ols_contrast(sel, 0));
    CHECK(std::isinf(lim.lower));
    CHECK(std::isinf(lim.upper));
    const IntervalReport ps = ps_interval(X, Y, sel, 0, 0.1, 1.0);
    const double normal = lim.eta_y - normal_quantile(0.9) * lim.eta_norm;
    CHECK(ps.lower == doctest::Approx(normal).epsilon(1e-7));
    CHECK(std::isinf(ps.upper));
  }
}
