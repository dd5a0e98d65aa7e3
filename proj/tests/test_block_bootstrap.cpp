#include "helpers.hpp"
#include "selci/block_bootstrap.hpp"
#include "selci/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace selci;
using namespace selci::testing;

namespace {

double lag1_autocorrelation(const Vector& v) {
  const Vector c = v.array() - v.mean();
  double num = 0.0;
  for (Index t = 1; t < c.size(); ++t) num += c(t) * c(t - 1);
  return num / c.squaredNorm();
}

}  // namespace

TEST_SUITE("block_bootstrap") {
  TEST_CASE("block plan sizes") {
    const BlockPlan plan = make_block_plan(200);
    CHECK(plan.l == 5);
    CHECK(plan.n_prime == 204);
    CHECK(plan.a == 40);
    CHECK(plan.k == 2);
    CHECK(plan.l_prime == 4);
    CHECK(plan.c == 100);
    CHECK(make_block_plan(1000).l == 10);
    CHECK(make_block_plan(8).k == 1);
    CHECK_THROWS_AS((void)make_block_plan(7), InvalidConfig);
  }

  TEST_CASE("integer cube root is exact at perfect cubes") {
    for (Index r = 1; r <= 120; ++r) {
      CHECK(integer_cbrt(r * r * r) == r);
      CHECK(integer_cbrt(r * r * r - 1) == r - 1);
    }
    CHECK(integer_cbrt(0) == 0);
  }

  TEST_CASE("constant series is a fixed point") {
    Rng rng(1);
    for (const Index n : {5, 50, 203}) {
      const Vector c = Vector::Constant(n, -2.25);
      CHECK(double_block_bootstrap(c, rng) == c);
    }
  }

  TEST_CASE("draws have the input length and only input values") {
    Rng rng(2);
    for (const Index n : {9, 50, 64, 200, 1000}) {
      const Vector eps = gaussian_vector(n, rng);
      const std::set<double> pool(eps.data(), eps.data() + n);
      for (int rep = 0; rep < 20; ++rep) {
        BootstrapDiagnostics diag;
        const Vector out = double_block_bootstrap(eps, rng, &diag);
        REQUIRE(out.size() == n);
        CHECK_FALSE(diag.iid_fallback);
        CHECK(std::all_of(out.data(), out.data() + n, [&](double v) { return pool.count(v) == 1; }));
      }
    }
  }

  TEST_CASE("consecutive output values come from adjacent input positions within a sub-block") {
    Rng rng(3);
    const Index n = 200;
    Vector eps(n);
    for (Index t = 0; t < n; ++t) eps(t) = static_cast<double>(t);
    const BlockPlan plan = make_block_plan(n);
    const Vector out = double_block_bootstrap(eps, rng);
    for (Index s = 0; s + plan.k <= n; s += plan.k) {
      for (Index i = 1; i < plan.k; ++i) {
        CHECK(std::fmod(out(s + i) - out(s + i - 1) + n, static_cast<double>(n)) == 1.0);
      }
    }
  }

  TEST_CASE("same seed gives the same draw") {
    Rng data(4);
    const Vector eps = gaussian_vector(300, data);
    Rng a(99);
    Rng b(99);
    CHECK(double_block_bootstrap(eps, a) == double_block_bootstrap(eps, b));
  }

  TEST_CASE("serial dependence is partly retained") {
    Rng rng(5);
    const Index n = 1000;
    std::normal_distribution<double> z(0.0, 1.0);
    Vector ar(n);
    ar(0) = z(rng);
    for (Index t = 1; t < n; ++t) ar(t) = 0.6 * ar(t - 1) + z(rng);
    const double source = lag1_autocorrelation(ar);
    REQUIRE(source > 0.5);
    double mean_rho = 0.0;
    const int draws = 200;
    for (int d = 0; d < draws; ++d) mean_rho += lag1_autocorrelation(double_block_bootstrap(ar, rng));
    mean_rho /= draws;
    // Sub-blocks of length k = 5 keep 4 of every 5 adjacent pairs.
    CHECK(mean_rho > 0.35);
    CHECK(mean_rho < source);
  }

  TEST_CASE("short series are resampled iid") {
    Rng rng(6);
    Vector eps(5);
    eps << 1, 2, 3, 4, 5;
    BootstrapDiagnostics diag;
    const Vector out = double_block_bootstrap(eps, rng, &diag);
    CHECK(diag.iid_fallback);
    CHECK(out.size() == 5);
    CHECK(((out.array() >= 1.0) && (out.array() <= 5.0)).all());
  }
}
