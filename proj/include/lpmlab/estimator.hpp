#pragma once

#include <cstdint>
#include <vector>

#include "lpmlab/graph.hpp"
#include "lpmlab/latent.hpp"
#include "lpmlab/link.hpp"
#include "lpmlab/rng.hpp"

namespace lpmlab {

enum class InitStrategy { Mds, Random, Provided };

struct FitConfig {
  int max_iters = 500;
  double grad_tol = 1e-6;          // on the projected-gradient max-norm
  double step_init = 1.0;
  double step_shrink = 0.5;
  double sufficient_increase = 1e-4;
  double min_step = 1e-12;
  int restarts = 1;                // restart 0 uses `init`, later ones Random
  InitStrategy init = InitStrategy::Mds;
  std::uint64_t seed = 0;
  Matrix provided_init;            // used when init == Provided
};

struct FitResult {
  Matrix z_hat;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
  std::vector<double> trace;       // per-iteration loglik of the winner, non-decreasing
  double wallclock_seconds = 0.0;  // informational; excluded from comparisons
};

/// Scales any row with norm > G back onto the sphere of radius G.
Matrix project_ball(const Matrix& z, double G);

/// Starting point inside the G-ball. Mds embeds surrogate distances from the
/// shrunk edge indicators (eta = 0.05) through the link inverse, clipping
/// non-Euclidean directions; inverse failures fall back to distance 2G.
Matrix initialize_positions(const AdjacencyMatrix& y, const LinkFunction& K, int d,
                            InitStrategy strategy, double G, Rng& rng,
                            const Matrix* provided = nullptr);

/// Maximizes the dyad log-likelihood over configurations with row norms
/// <= G by monotone projected gradient ascent with backtracking, best of
/// `restarts` starts. Deterministic given (y, K, d, G, cfg). Throws a
/// runtime error if every restart starts at a degenerate likelihood.
FitResult fit_restricted_mle(const AdjacencyMatrix& y, const LinkFunction& K, int d, double G,
                             const FitConfig& cfg = {});

struct GridOracleResult {
  Matrix z_star;       // n x 1, feasible (row norms <= G)
  double loglik = 0.0;
};

/// Exhaustive reference maximizer for d = 1 and tiny n: first coordinate
/// gauged to 0, the rest on a lattice of multiples of `resolution` over
/// [-2G, 2G], keeping configurations whose coordinate range is <= 2G (these
/// are exactly the distance profiles reachable under the row-norm cap, up to
/// translation). Refuses instances needing more than 1e8 evaluations.
GridOracleResult grid_search_oracle(const AdjacencyMatrix& y, const LinkFunction& K, int d,
                                    double G, double resolution);

}  // namespace lpmlab
