#include "lpmlab/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lpmlab {

namespace {

struct GridMax {
  double value = -std::numeric_limits<double>::infinity();
  double argmax = 0.0;
  bool any_nonzero_deriv = false;
};

template <class F>
GridMax geometric_scan(double lo, double hi, int points, const F& score) {
  GridMax best;
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const double x = lo * std::exp(ratio * frac);
    const auto [value, nonzero] = score(x);
    best.any_nonzero_deriv = best.any_nonzero_deriv || nonzero;
    if (value > best.value) {
      best.value = value;
      best.argmax = x;
    }
  }
  return best;
}

template <class F>
GridMax refined_scan(double lo, double hi, int points, const F& score) {
  GridMax coarse = geometric_scan(lo, hi, points, score);
  // One refinement pass over the bracket around the coarse argmax.
  const double step = std::pow(hi / lo, 1.0 / (points - 1));
  const double rlo = std::max(lo, coarse.argmax / step);
  const double rhi = std::min(hi, coarse.argmax * step);
  GridMax fine = geometric_scan(rlo, rhi, points, score);
  fine.any_nonzero_deriv = fine.any_nonzero_deriv || coarse.any_nonzero_deriv;
  if (coarse.value > fine.value) {
    fine.value = coarse.value;
    fine.argmax = coarse.argmax;
  }
  return fine;
}

}  // namespace

LinkDiagnostics alpha_beta_diagnostics(const LinkFunction& K, double G_of_n, double eps_K,
                                       int grid_points, std::int64_t n) {
  if (!(G_of_n > 0.0) || std::isinf(G_of_n)) {
    throw std::invalid_argument("diagnostics: G(n) must be finite and > 0");
  }
  if (!(eps_K > 0.0)) throw std::invalid_argument("diagnostics: eps_K must be > 0");
  if (G_of_n <= eps_K) {
    throw std::invalid_argument("diagnostics: G(n) must exceed the lower cutoff eps_K");
  }
  if (grid_points < 16) throw std::invalid_argument("diagnostics: grid_points must be >= 16");

  const double eps = K.eps();
  const double hi = 2.0 * G_of_n;

  auto alpha_score = [&](double x) {
    const double kd = K.deriv(x, n);
    const double kv = K.eval(x, n);
    return std::pair<double, bool>(std::abs(kd) / (std::sqrt(x) * kv * eps), kd != 0.0);
  };
  auto beta_score = [&](double x) {
    const double kd = K.deriv(x, n);
    const double kv = K.eval(x, n);
    if (kd == 0.0) {
      return std::pair<double, bool>(std::numeric_limits<double>::infinity(), false);
    }
    return std::pair<double, bool>(x * kv / (kd * kd), true);
  };

  LinkDiagnostics diag;
  diag.alpha_grid_lo = eps_K;
  diag.beta_grid_lo = std::min(eps_K, 1e-6);
  diag.grid_hi = hi;
  diag.grid_points = grid_points;

  const GridMax alpha = refined_scan(eps_K, hi, grid_points, alpha_score);
  const GridMax beta = refined_scan(diag.beta_grid_lo, hi, grid_points, beta_score);
  if (!beta.any_nonzero_deriv) {
    throw std::runtime_error("diagnostics: K' vanishes on the whole grid, beta is undefined");
  }

  diag.alpha = alpha.value;
  diag.alpha_argmax = alpha.argmax;
  diag.beta = beta.value;
  diag.beta_argmax = beta.argmax;
  return diag;
}

}  // namespace lpmlab
