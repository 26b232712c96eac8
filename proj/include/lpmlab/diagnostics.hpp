#pragma once

#include <cstdint>

#include "lpmlab/link.hpp"

namespace lpmlab {

/// Curvature/steepness summaries of a link over the working distance range
/// (0, 2G]. alpha bounds |K'| / (sqrt(x) K(x) eps) over [eps_K, 2G]; beta
/// bounds x K(x) / K'(x)^2 over (0, 2G]. Both are numeric suprema on a
/// geometric grid with one refinement pass around the coarse argmax, so the
/// grid is part of the result. For links whose beta integrand diverges as
/// x -> 0 (polynomial with a > 1.5) the reported beta depends on the grid
/// floor by construction.
struct LinkDiagnostics {
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_argmax = 0.0;
  double beta_argmax = 0.0;
  double alpha_grid_lo = 0.0;
  double beta_grid_lo = 0.0;
  double grid_hi = 0.0;
  int grid_points = 0;
};

/// G_of_n must exceed eps_K; a derivative that vanishes on the whole grid
/// makes beta undefined and is reported as a runtime error.
LinkDiagnostics alpha_beta_diagnostics(const LinkFunction& K, double G_of_n,
                                       double eps_K = 1e-3, int grid_points = 10000,
                                       std::int64_t n = 0);

}  // namespace lpmlab
