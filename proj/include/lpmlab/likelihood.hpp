#pragma once

#include <cstdint>

#include "lpmlab/graph.hpp"
#include "lpmlab/latent.hpp"
#include "lpmlab/link.hpp"

namespace lpmlab {

/// Exact pairwise squared Euclidean distances between rows (direct
/// differences, not the Gram shortcut, so entries are never negative).
Matrix squared_distances(const Matrix& z);

/// Entrywise K(sqrt(d2)) with zero diagonal; the node count handed to
/// scaled links is the matrix size.
Matrix link_matrix(const LinkFunction& K, const Matrix& d2);

/// Bernoulli log-likelihood summed over unordered dyads. Probabilities are
/// clamped to [1e-12, 1 - 1e-12] inside the logs; an exact 0 (or 1) that
/// contradicts an observation is reported as -infinity rather than thrown.
double log_likelihood(const Matrix& z, const AdjacencyMatrix& y, const LinkFunction& K);

/// Gradient of log_likelihood in the rows of z. Pairs at numerically zero
/// distance contribute nothing (symmetric limit); for polynomial links with
/// a < 2 near-coincident pairs are also skipped (the limit does not exist)
/// and counted in *skipped_pairs when provided.
Matrix log_likelihood_gradient(const Matrix& z, const AdjacencyMatrix& y, const LinkFunction& K,
                               int* skipped_pairs = nullptr);

/// Divergences between dyad probability matrices, summed over unordered
/// dyads and doubled (both orientations of each dyad count). A zero in q
/// against a positive p yields +infinity.
double kl_divergence(const Matrix& p, const Matrix& q);
double hellinger_sq(const Matrix& p, const Matrix& q);

/// Squared Frobenius distance over both orientations of each dyad,
/// comparable with the divergences above.
double frobenius_sq(const Matrix& p, const Matrix& q);

struct LearnabilityErrors {
  double pos_err = 0.0;   // Procrustes-aligned squared error / n
  double dist_err = 0.0;  // squared distance-matrix error / n^2
  double prob_err = 0.0;  // squared probability-matrix error / e_n
};

/// e_n is the expected-edge scale of the generating model (> 0).
LearnabilityErrors learnability_errors(const Matrix& z_hat, const Matrix& z,
                                       const LinkFunction& K, double e_n);

}  // namespace lpmlab
