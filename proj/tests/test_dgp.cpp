#include "selci/dgp.hpp"
#include "selci/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace selci;

TEST_SUITE("dgp") {
  TEST_CASE("coefficient vector has the tabulated multiset") {
    const CoefVector b = make_beta(250);
    REQUIRE(b.values.size() == 250);
    int c6 = 0, c4 = 0, c2 = 0, c1 = 0;
    for (Index j = 0; j < 250; ++j) {
      const double v = b.values(j);
      c6 += v == 0.6;
      c4 += v == 0.4;
      c2 += v == 0.2;
      c1 += v == 0.1;
    }
    CHECK(c6 == 2);
    CHECK(c4 == 1);
    CHECK(c2 == 3);
    CHECK(c1 == 4);
    CHECK(b.values(3) == 0.2);
    CHECK(b.values(6) == 0.1);
    CHECK(b.support == IndexList{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK_THROWS_AS((void)make_beta(9), InvalidConfig);
  }

  TEST_CASE("setting names parse case-insensitively") {
    CHECK(parse_setting("lai") == Setting::Lai);
    CHECK(parse_setting("GARCH") == Setting::Garch);
    CHECK(parse_setting("Mvn") == Setting::Mvn);
    CHECK(to_string(Setting::Ar) == "AR");
    CHECK_THROWS_AS((void)parse_setting("arma"), InvalidConfig);
  }

  TEST_CASE("generation is deterministic per seed and distinct across seeds") {
    for (const Setting s : {Setting::Lai, Setting::Garch, Setting::Ar, Setting::Iid, Setting::Mvn}) {
      CAPTURE(to_string(s));
      DgpConfig cfg{s, 60, 30, 11, 50};
      const CoefVector beta = make_beta(30);
      const Dataset a = generate(cfg, beta);
      const Dataset b = generate(cfg, beta);
      CHECK(a.X == b.X);
      CHECK(a.Y == b.Y);
      CHECK(a.X.rows() == 60);
      CHECK(a.X.cols() == 30);
      CHECK(a.X.allFinite());
      cfg.seed = 12;
      const Dataset c = generate(cfg, beta);
      CHECK(c.X != a.X);
    }
  }

  TEST_CASE("response equals X beta plus the recorded noise") {
    for (const Setting s : {Setting::Lai, Setting::Garch, Setting::Ar, Setting::Iid, Setting::Mvn}) {
      CAPTURE(to_string(s));
      const CoefVector beta = make_beta(25);
      const Dataset ds = generate(DgpConfig{s, 50, 25, 3, 40}, beta);
      const Vector resid = ds.Y - ds.X * beta.values - ds.noise;
      CHECK(resid.cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("autoregressive design carries the lagged response in its first column") {
    const Dataset ds = generate(DgpConfig{Setting::Ar, 80, 20, 5, 30}, make_beta(20));
    for (Index t = 1; t < 80; ++t) CHECK(ds.X(t, 0) == ds.Y(t - 1));
  }

  TEST_CASE("noise scale per setting") {
    CHECK(error_sd(Setting::Garch) == doctest::Approx(0.5));
    CHECK(error_sd(Setting::Iid) == 1.0);
    // Large-sample variance checks for the designs with known marginal laws.
    const Dataset iid = generate(DgpConfig{Setting::Iid, 4000, 10, 1, 0}, make_beta(10));
    CHECK(iid.X.col(4).squaredNorm() / 4000.0 == doctest::Approx(2.0).epsilon(0.08));
    const Dataset mvn = generate(DgpConfig{Setting::Mvn, 4000, 10, 1, 0}, make_beta(10));
    const double corr = mvn.X.col(0).dot(mvn.X.col(1)) / (mvn.X.col(0).norm() * mvn.X.col(1).norm());
    CHECK(corr == doctest::Approx(0.2).epsilon(0.3));
    const Dataset garch = generate(DgpConfig{Setting::Garch, 6000, 10, 2, 200}, make_beta(10));
    CHECK(garch.noise.squaredNorm() / 6000.0 == doctest::Approx(0.25).epsilon(0.15));
  }

  TEST_CASE("invalid configurations are rejected") {
    CHECK_THROWS_AS(validate(DgpConfig{Setting::Iid, 3, 10, 0, 0}), InvalidConfig);
    CHECK_THROWS_AS(validate(DgpConfig{Setting::Iid, 10, 0, 0, 0}), InvalidConfig);
    CHECK_THROWS_AS((void)generate(DgpConfig{Setting::Iid, 10, 12, 0, 0}, make_beta(11)), InvalidConfig);
  }
}
