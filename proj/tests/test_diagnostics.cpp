#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lpmlab/diagnostics.hpp"

using namespace lpmlab;

namespace {

// Independent dense-grid supremum of the same score definitions, written
// directly from the formulas rather than through the refinement machinery.
struct DenseSup {
  double alpha = 0.0;
  double beta = 0.0;
};

DenseSup dense_oracle(const LinkFunction& K, double G, double eps_K, int points,
                      std::int64_t n = 0) {
  DenseSup out;
  const double eps = K.eps();
  const double hi = 2.0 * G;
  const double alpha_lo = eps_K;
  const double beta_lo = std::min(eps_K, 1e-6);
  out.alpha = -std::numeric_limits<double>::infinity();
  out.beta = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    const double xa = alpha_lo * std::exp(std::log(hi / alpha_lo) * f);
    const double xb = beta_lo * std::exp(std::log(hi / beta_lo) * f);
    const double da = K.deriv(xa, n);
    out.alpha = std::max(out.alpha, std::abs(da) / (std::sqrt(xa) * K.eval(xa, n) * eps));
    const double db = K.deriv(xb, n);
    const double beta = db == 0.0 ? std::numeric_limits<double>::infinity()
                                  : xb * K.eval(xb, n) / (db * db);
    out.beta = std::max(out.beta, beta);
  }
  return out;
}

}  // namespace

TEST_CASE("input guards") {
  const LinkFunction k = LinkFunction::logistic_exp(1.0);
  CHECK_THROWS_AS(alpha_beta_diagnostics(k, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_beta_diagnostics(k, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_beta_diagnostics(k, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(alpha_beta_diagnostics(k, 5.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_beta_diagnostics(k, 5.0, 6.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_beta_diagnostics(k, 5.0, 1e-3, 8), std::invalid_argument);
}

TEST_CASE("logistic link: suprema sit at the grid ends and match closed forms") {
  const LinkFunction k = LinkFunction::logistic_exp(1.0);
  const double G = 5.0;
  const double eps_K = 1e-3;
  const LinkDiagnostics diag = alpha_beta_diagnostics(k, G, eps_K);

  // alpha score (1 - K(x)) / (sqrt(x) eps) decreases near 0, so the cutoff
  // itself is the argmax.
  const double expected_alpha = (1.0 - k.eval(eps_K)) / (std::sqrt(eps_K) * k.eps());
  CHECK(diag.alpha == doctest::Approx(expected_alpha).epsilon(1e-9));
  CHECK(diag.alpha_argmax == doctest::Approx(eps_K).epsilon(1e-9));

  // beta score x / (K (1-K)^2) increases, so the upper end dominates.
  const double hi = 2.0 * G;
  const double kv = k.eval(hi);
  const double expected_beta = hi / (kv * (1.0 - kv) * (1.0 - kv));
  CHECK(diag.beta == doctest::Approx(expected_beta).epsilon(1e-6));
  CHECK(diag.beta_argmax == doctest::Approx(hi).epsilon(1e-6));

  CHECK(diag.grid_hi == doctest::Approx(hi));
  CHECK(diag.alpha_grid_lo == eps_K);
  CHECK(diag.beta_grid_lo == doctest::Approx(1e-6));
  CHECK(diag.grid_points == 10000);
}

TEST_CASE("polynomial link: interior alpha maximum matches calculus") {
  // score = 3 x^{3/2} / (eps (C + x^3)) peaks at x = (C)^{1/3} with C = 2.
  const LinkFunction k = LinkFunction::polynomial(2.0, 3.0);
  const LinkDiagnostics diag = alpha_beta_diagnostics(k, 5.0);
  const double x_star = std::cbrt(2.0);
  const double expected = 3.0 * std::pow(x_star, 1.5) / (0.5 * (2.0 + 2.0));
  CHECK(diag.alpha == doctest::Approx(expected).epsilon(1e-8));
  CHECK(diag.alpha_argmax == doctest::Approx(x_star).epsilon(1e-3));
}

TEST_CASE("agrees with an independent dense scan") {
  const double G = 4.0;
  for (const auto& k : {LinkFunction::logistic_exp(0.7), LinkFunction::polynomial(3.0, 2.0),
                        LinkFunction::polynomial(2.0, 3.0)}) {
    const LinkDiagnostics diag = alpha_beta_diagnostics(k, G);
    const DenseSup dense = dense_oracle(k, G, 1e-3, 2000001);
    CHECK(diag.alpha == doctest::Approx(dense.alpha).epsilon(1e-3));
    CHECK(diag.beta == doctest::Approx(dense.beta).epsilon(1e-3));
  }
}

TEST_CASE("resolution stability and refinement direction") {
  const LinkFunction k = LinkFunction::logistic_exp(1.0);
  const LinkDiagnostics coarse = alpha_beta_diagnostics(k, 5.0, 1e-3, 100);
  const LinkDiagnostics fine = alpha_beta_diagnostics(k, 5.0, 1e-3, 40000);
  CHECK(fine.alpha >= coarse.alpha * (1.0 - 1e-9));
  CHECK(fine.beta >= coarse.beta * (1.0 - 1e-9));
  const LinkDiagnostics mid = alpha_beta_diagnostics(k, 5.0, 1e-3, 10000);
  CHECK(mid.alpha == doctest::Approx(fine.alpha).epsilon(2e-3));
  CHECK(mid.beta == doctest::Approx(fine.beta).epsilon(2e-3));
}

TEST_CASE("polynomial beta diverges toward zero by design") {
  // For a = 3 the beta integrand grows like C^3 / (9 x^3), so the reported
  // value is pinned to the grid floor; halving the floor would quadruple it.
  const LinkFunction k = LinkFunction::polynomial(2.0, 3.0);
  const LinkDiagnostics diag = alpha_beta_diagnostics(k, 5.0);
  const double floor_x = diag.beta_grid_lo;
  const double predicted = std::pow(2.0 + floor_x * floor_x * floor_x, 3.0) /
                           (9.0 * floor_x * floor_x * floor_x);
  CHECK(diag.beta == doctest::Approx(predicted).epsilon(1e-6));
  CHECK(diag.beta_argmax == doctest::Approx(floor_x).epsilon(1e-9));
}

TEST_CASE("scaled links shift beta by n^{p_s} and leave alpha alone") {
  const LinkFunction base = LinkFunction::logistic_exp(1.0);
  const LinkFunction scaled = LinkFunction::scaled_graphon(base, 0.5);
  const LinkDiagnostics d0 = alpha_beta_diagnostics(base, 5.0);
  const LinkDiagnostics d16 = alpha_beta_diagnostics(scaled, 5.0, 1e-3, 10000, 16);
  CHECK(d16.alpha == doctest::Approx(d0.alpha).epsilon(1e-12));
  CHECK(d16.beta == doctest::Approx(4.0 * d0.beta).epsilon(1e-12));
}

TEST_CASE("flat links have undefined beta") {
  const LinkFunction flat = LinkFunction::custom({0.0, 1.0, 2.0}, {0.3, 0.3, 0.3});
  CHECK_THROWS_AS(alpha_beta_diagnostics(flat, 5.0), std::runtime_error);
}

TEST_CASE("a flat tail inside the range makes beta infinite") {
  const LinkFunction k = LinkFunction::custom({0.0, 1.0, 2.0}, {0.5, 0.3, 0.2});
  // 2G = 10 extends well past the last knot where K' == 0.
  const LinkDiagnostics diag = alpha_beta_diagnostics(k, 5.0);
  CHECK(std::isinf(diag.beta));
  CHECK(std::isfinite(diag.alpha));
  // Restricted to the strictly decreasing part, beta is finite again.
  const LinkDiagnostics tight = alpha_beta_diagnostics(k, 0.9);
  CHECK(std::isfinite(tight.beta));
}
