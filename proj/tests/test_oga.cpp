#include "helpers.hpp"
#include "oga_oracle.hpp"
#include "selci/error.hpp"
#include "selci/oga.hpp"

#include <doctest.h>

using namespace selci;
using namespace selci::testing;

TEST_SUITE("oga") {
  TEST_CASE("matches brute-force forward stepwise on random instances") {
    Rng rng(2024);
    for (int inst = 0; inst < 100; ++inst) {
      const Index n = uniform_index(10, 30, rng);
      const Index p = uniform_index(3, 15, rng);
      const Index m = uniform_index(1, std::min<Index>({8, n, p}), rng);
      const Matrix X = gaussian_matrix(n, p, rng);
      const Vector Y = gaussian_vector(n, rng);
      const SelectionResult got = oga(X, Y, m);
      const NaiveStepwise want = naive_stepwise(X, Y, m);
      CAPTURE(inst);
      REQUIRE(got.m == m);
      CHECK(got.j_hat == want.order);
      CHECK((got.beta_oga - want.beta).cwiseAbs().maxCoeff() < 1e-8);
      for (Index k = 0; k < m; ++k) {
        CHECK(got.residual_norms(k) == doctest::Approx(want.residual_norms[static_cast<std::size_t>(k)]).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("QR factors reproduce the selected design") {
    Rng rng(3);
    const Matrix X = gaussian_matrix(40, 20, rng);
    const Vector Y = gaussian_vector(40, rng);
    const SelectionResult r = oga(X, Y, 6);
    const Matrix XJ = select_columns(X, r.j_hat);
    CHECK((r.Q * r.R - XJ).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((r.Q.transpose() * r.Q - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.R.triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero());
  }

  TEST_CASE("parallel and serial scans agree, including wide designs") {
    Rng rng(7);
    const Matrix X = gaussian_matrix(60, 1500, rng);
    const Vector Y = X.col(17) * 2.0 + X.col(900) - X.col(1201) * 0.5 + gaussian_vector(60, rng) * 0.1;
    const SelectionResult a = oga(X, Y, 10);
    const SelectionResult b = reference::oga(X, Y, 10);
    CHECK(a.j_hat == b.j_hat);
    CHECK(a.beta_oga == b.beta_oga);
    CHECK(a.j_hat[0] == 17);
  }

  TEST_CASE("ties resolve to the lowest index") {
    Matrix X(4, 3);
    X << 1, 1, 0,
         0, 0, 1,
         0, 0, 0,
         0, 0, 0;
    const Vector Y = Vector::Unit(4, 0);
    CHECK(oga(X, Y, 1).j_hat == IndexList{0});
    CHECK(reference::oga(X, Y, 1).j_hat == IndexList{0});
  }

  TEST_CASE("zero columns are never picked and the path stops early") {
    Matrix X = Matrix::Zero(6, 3);
    X(0, 1) = 1.0;
    Vector Y = Vector::Zero(6);
    Y(0) = 2.0;
    const SelectionResult r = oga(X, Y, 3);
    CHECK(r.j_hat == IndexList{1});
    CHECK(r.m == 1);
    CHECK(r.early_stop);
    CHECK(r.beta_oga(1) == doctest::Approx(2.0));
  }

  TEST_CASE("duplicate columns are skipped as collinear") {
    Rng rng(5);
    Matrix X = gaussian_matrix(20, 4, rng);
    X.col(2) = X.col(0) * 3.0;
    const Vector Y = X.col(0) + 0.5 * X.col(1) + 0.1 * gaussian_vector(20, rng);
    const SelectionResult r = oga(X, Y, 3);
    CHECK_FALSE((contains(r.j_hat, 0) && contains(r.j_hat, 2)));
  }

  TEST_CASE("K_n and HDBIC") {
    CHECK(max_oga_steps(400, 500) == 16);
    CHECK(max_oga_steps(200, 250) == 2 * static_cast<Index>(std::floor(std::sqrt(200.0 / std::log(250.0)))));
    CHECK(max_oga_steps(10, 3) == 3);
    // 2 floor(sqrt(4 / log 1000)) = 0, raised to the minimum of one step.
    CHECK(max_oga_steps(4, 1000) == 1);
    CHECK(hdbic(Vector::Constant(5, 2.0), 100, 50) == 1);
    Vector rn(4);
    rn << 3.0, 1.0, 0.0, 0.0;
    CHECK(hdbic(rn, 100, 50) == 3);
    CHECK(hdbic(Vector(0), 100, 50) == 0);
    rn << 10.0, 1.0, 0.99, 0.98;
    CHECK(hdbic(rn, 100, 50) == 2);
    CHECK_THROWS_AS((void)oga(Matrix::Ones(3, 3), Vector::Ones(3), 4), InvalidConfig);
  }

  TEST_CASE("truncated path equals a shorter run") {
    Rng rng(9);
    const Matrix X = gaussian_matrix(30, 12, rng);
    const Vector Y = gaussian_vector(30, rng);
    const SelectionResult full = oga(X, Y, 7);
    const SelectionResult cut = truncate_path(full, 4);
    const SelectionResult direct = oga(X, Y, 4);
    CHECK(cut.j_hat == direct.j_hat);
    CHECK((cut.beta_oga - direct.beta_oga).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("Gram-form OGA follows the explicit path") {
    Rng rng(31);
    for (int inst = 0; inst < 30; ++inst) {
      const Index n = uniform_index(20, 60, rng);
      const Index p = uniform_index(5, 80, rng);
      const Matrix X = gaussian_matrix(n, p, rng);
      const Vector Y = X.col(0) * 1.5 - X.col(p - 1) + gaussian_vector(n, rng);
      const Index steps = std::min<Index>(8, std::min(n, p));
      const SelectionResult want = oga(X, Y, steps);
      GramOgaWorkspace ws;
      GramPath got;
      oga_gram(X.transpose() * X, X.transpose() * Y, Y.squaredNorm(), steps, ws, got);
      CAPTURE(inst);
      CHECK(got.order == want.j_hat);
      for (Index k = 0; k < want.m; ++k) {
        CHECK(got.residual_norms(k) == doctest::Approx(want.residual_norms(k)).epsilon(1e-7));
        CHECK(got.beta_q(k) == doctest::Approx(want.beta_q(k)).epsilon(1e-7));
      }
    }
  }
}
