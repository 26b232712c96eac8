#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "lpmlab/estimator.hpp"
#include "lpmlab/likelihood.hpp"
#include "lpmlab/rng.hpp"
#include "matrix_eq.hpp"

using namespace lpmlab;

namespace {

AdjacencyMatrix zeros(Eigen::Index n) { return AdjacencyMatrix::Zero(n, n); }

AdjacencyMatrix with_edges(Eigen::Index n, std::initializer_list<std::pair<int, int>> edges) {
  AdjacencyMatrix y = zeros(n);
  for (auto [i, j] : edges) {
    y(i, j) = 1;
    y(j, i) = 1;
  }
  return y;
}

AdjacencyMatrix two_cliques(Eigen::Index n) {
  // Two dense halves, no edges across: a fit instance with a clear optimum.
  AdjacencyMatrix y = zeros(n);
  const Eigen::Index half = n / 2;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if ((i < half) == (j < half)) {
        y(i, j) = 1;
        y(j, i) = 1;
      }
  return y;
}

}  // namespace

TEST_CASE("project_ball rescales only rows outside the ball") {
  Matrix z(3, 2);
  z << 3.0, 4.0, 0.1, 0.2, 0.0, 0.0;
  const Matrix out = project_ball(z, 1.0);
  CHECK(out.row(0).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(out(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(out(1, 0) == 0.1);  // untouched, bit for bit
  CHECK(out(1, 1) == 0.2);
  CHECK(out(2, 0) == 0.0);
  CHECK_THROWS_AS(project_ball(z, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(project_ball(z, -1.0), std::invalid_argument);
}

TEST_CASE("fit input validation") {
  const auto K = LinkFunction::logistic_exp(1.0);
  FitConfig cfg;

  AdjacencyMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(fit_restricted_mle(rect, K, 1, 1.0, cfg), std::invalid_argument);

  AdjacencyMatrix one = zeros(1);
  CHECK_THROWS_AS(fit_restricted_mle(one, K, 1, 1.0, cfg), std::invalid_argument);

  AdjacencyMatrix y = with_edges(3, {{0, 1}});
  CHECK_THROWS_AS(fit_restricted_mle(y, K, 0, 1.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(fit_restricted_mle(y, K, 1, 0.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(
      fit_restricted_mle(y, K, 1, std::numeric_limits<double>::infinity(), cfg),
      std::invalid_argument);

  AdjacencyMatrix diag = zeros(3);
  diag(1, 1) = 1;
  CHECK_THROWS_AS(fit_restricted_mle(diag, K, 1, 1.0, cfg), std::invalid_argument);

  AdjacencyMatrix asym = zeros(3);
  asym(0, 1) = 1;
  CHECK_THROWS_AS(fit_restricted_mle(asym, K, 1, 1.0, cfg), std::invalid_argument);

  AdjacencyMatrix big = zeros(3);
  big(0, 1) = big(1, 0) = 2;
  CHECK_THROWS_AS(fit_restricted_mle(big, K, 1, 1.0, cfg), std::invalid_argument);

  FitConfig bad = cfg;
  bad.restarts = 0;
  CHECK_THROWS_AS(fit_restricted_mle(y, K, 1, 1.0, bad), std::invalid_argument);
  bad = cfg;
  bad.max_iters = 0;
  CHECK_THROWS_AS(fit_restricted_mle(y, K, 1, 1.0, bad), std::invalid_argument);
  bad = cfg;
  bad.step_shrink = 1.0;
  CHECK_THROWS_AS(fit_restricted_mle(y, K, 1, 1.0, bad), std::invalid_argument);
  bad = cfg;
  bad.step_init = 0.0;
  CHECK_THROWS_AS(fit_restricted_mle(y, K, 1, 1.0, bad), std::invalid_argument);
}

TEST_CASE("two nodes with an edge meet, without an edge fill the diameter") {
  const auto K = LinkFunction::logistic_exp(1.0);  // K(0) = 1/2, smooth at 0
  const double G = 2.0;
  FitConfig cfg;
  cfg.grad_tol = 1e-8;
  cfg.max_iters = 2000;

  auto edge = fit_restricted_mle(with_edges(2, {{0, 1}}), K, 1, G, cfg);
  const double d_edge = (edge.z_hat.row(0) - edge.z_hat.row(1)).norm();
  CHECK(d_edge < 1e-3);
  CHECK(edge.loglik == doctest::Approx(std::log(0.5)).epsilon(1e-6));

  auto gap = fit_restricted_mle(zeros(2), K, 1, G, cfg);
  const double d_gap = (gap.z_hat.row(0) - gap.z_hat.row(1)).norm();
  CHECK(d_gap == doctest::Approx(2.0 * G).epsilon(1e-3));
  CHECK(gap.loglik == doctest::Approx(std::log(1.0 - K.eval(2.0 * G))).epsilon(1e-6));
  CHECK(gap.z_hat.row(0).norm() <= G * (1.0 + 1e-12));
  CHECK(gap.z_hat.row(1).norm() <= G * (1.0 + 1e-12));
}

TEST_CASE("fit matches or beats the exhaustive grid oracle on a path graph") {
  const auto K = LinkFunction::polynomial(2.0, 2.0);
  const AdjacencyMatrix y = with_edges(3, {{0, 1}, {1, 2}});
  const double G = 3.0;

  const auto oracle = grid_search_oracle(y, K, 1, G, 0.01);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(oracle.z_star(i, 0)) <= G + 1e-12);
  CHECK(log_likelihood(oracle.z_star, y, K) == doctest::Approx(oracle.loglik).epsilon(1e-12));

  FitConfig cfg;
  cfg.restarts = 5;
  cfg.grad_tol = 1e-8;
  cfg.max_iters = 2000;
  const auto fit = fit_restricted_mle(y, K, 1, G, cfg);
  // The continuum optimum dominates any lattice configuration.
  CHECK(fit.loglik >= oracle.loglik - 1e-9);
  CHECK(fit.loglik <= oracle.loglik + 0.05);  // and the lattice is fine enough to be close
}

TEST_CASE("fit is deterministic and its trace is monotone") {
  Rng rng(99);
  const Eigen::Index n = 12;
  const AdjacencyMatrix y = two_cliques(n);
  const auto K = LinkFunction::logistic_exp(1.0);
  FitConfig cfg;
  cfg.restarts = 3;
  cfg.seed = 17;

  const auto a = fit_restricted_mle(y, K, 2, 3.0, cfg);
  const auto b = fit_restricted_mle(y, K, 2, 3.0, cfg);
  CHECK(testutil::exact_equal(a.z_hat, b.z_hat));
  CHECK(a.loglik == b.loglik);
  CHECK(a.iterations == b.iterations);
  CHECK(a.converged == b.converged);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i] == b.trace[i]);

  REQUIRE(!a.trace.empty());
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i] >= a.trace[i - 1]);
  CHECK(a.trace.back() == a.loglik);
  CHECK(a.restarts_used == 3);

  // A different seed changes the random restarts and, typically, the result.
  FitConfig other = cfg;
  other.seed = 18;
  other.init = InitStrategy::Random;
  const auto c = fit_restricted_mle(y, K, 2, 3.0, other);
  CHECK(std::isfinite(c.loglik));
}

TEST_CASE("more restarts never lose likelihood") {
  const AdjacencyMatrix y = two_cliques(10);
  const auto K = LinkFunction::logistic_exp(1.0);
  FitConfig one;
  one.restarts = 1;
  one.seed = 5;
  FitConfig five = one;
  five.restarts = 5;
  const auto a = fit_restricted_mle(y, K, 2, 3.0, one);
  const auto b = fit_restricted_mle(y, K, 2, 3.0, five);
  // Restart 0 is identical in both runs, so the best of five dominates.
  CHECK(b.loglik >= a.loglik);
}

TEST_CASE("provided starts are projected and the optimum is rotation covariant") {
  const AdjacencyMatrix y = two_cliques(6);
  const auto K = LinkFunction::logistic_exp(1.0);
  const double G = 2.0;

  Matrix init(6, 2);
  init << 5.0, 0.0, 0.0, 5.0, 1.0, 1.0, -1.0, 0.5, 0.25, -0.5, -3.0, -4.0;

  FitConfig cfg;
  cfg.init = InitStrategy::Provided;
  cfg.provided_init = init;
  cfg.restarts = 1;
  cfg.grad_tol = 1e-8;
  cfg.max_iters = 3000;
  const auto base = fit_restricted_mle(y, K, 2, G, cfg);
  CHECK(base.trace.front() == doctest::Approx(log_likelihood(project_ball(init, G), y, K))
                                  .epsilon(1e-12));

  // Rotating the start rotates the whole trajectory; the found value agrees.
  Matrix rot(2, 2);
  const double th = 0.37;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  FitConfig rcfg = cfg;
  rcfg.provided_init = init * rot.transpose();
  const auto rotated = fit_restricted_mle(y, K, 2, G, rcfg);
  CHECK(rotated.loglik == doctest::Approx(base.loglik).epsilon(1e-7));

  FitConfig bad = cfg;
  bad.provided_init = Matrix::Zero(5, 2);
  CHECK_THROWS_AS(fit_restricted_mle(y, K, 2, G, bad), std::invalid_argument);
}

TEST_CASE("initialize_positions stays inside the ball for every strategy") {
  Rng rng(4242);
  const AdjacencyMatrix y = two_cliques(8);
  const auto K = LinkFunction::polynomial(2.0, 1.0);
  const double G = 1.5;

  const Matrix mds = initialize_positions(y, K, 2, InitStrategy::Mds, G, rng);
  REQUIRE(mds.rows() == 8);
  REQUIRE(mds.cols() == 2);
  for (Eigen::Index i = 0; i < 8; ++i) CHECK(mds.row(i).norm() <= G * (1.0 + 1e-12));

  for (int rep = 0; rep < 50; ++rep) {
    const Matrix r = initialize_positions(y, K, 3, InitStrategy::Random, G, rng);
    for (Eigen::Index i = 0; i < 8; ++i) CHECK(r.row(i).norm() <= G * (1.0 + 1e-12));
  }

  CHECK_THROWS_AS(initialize_positions(y, K, 2, InitStrategy::Provided, G, rng),
                  std::invalid_argument);
  Matrix wrong(8, 3);
  wrong.setZero();
  CHECK_THROWS_AS(initialize_positions(y, K, 2, InitStrategy::Provided, G, rng, &wrong),
                  std::invalid_argument);
}

TEST_CASE("grid oracle solves two-node instances exactly") {
  const auto K = LinkFunction::polynomial(2.0, 1.0);

  // With an edge the lattice optimum is coincidence.
  auto edge = grid_search_oracle(with_edges(2, {{0, 1}}), K, 1, 1.0, 0.25);
  CHECK(edge.loglik == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK((edge.z_star.row(0) - edge.z_star.row(1)).norm() == 0.0);

  // Without an edge the range cap allows at most the ball diameter 2G.
  auto gap = grid_search_oracle(zeros(2), K, 1, 1.0, 0.25);
  CHECK(std::abs(gap.z_star(0, 0) - gap.z_star(1, 0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(gap.loglik == doctest::Approx(std::log(1.0 - 0.25)).epsilon(1e-12));
  // Recentred output is feasible.
  CHECK(std::abs(gap.z_star(0, 0)) <= 1.0 + 1e-12);
  CHECK(std::abs(gap.z_star(1, 0)) <= 1.0 + 1e-12);
}

TEST_CASE("grid oracle guards its domain") {
  const auto K = LinkFunction::polynomial(2.0, 1.0);
  const AdjacencyMatrix y = with_edges(3, {{0, 1}});
  CHECK_THROWS_AS(grid_search_oracle(y, K, 2, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(grid_search_oracle(y, K, 1, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(grid_search_oracle(y, K, 1, 1.0, -0.5), std::invalid_argument);

  // 12 nodes on a centiresolution lattice over [-4, 4] is astronomically many
  // configurations; the evaluation guard must refuse.
  const AdjacencyMatrix big = two_cliques(12);
  CHECK_THROWS_AS(grid_search_oracle(big, K, 1, 2.0, 0.01), std::invalid_argument);
}
