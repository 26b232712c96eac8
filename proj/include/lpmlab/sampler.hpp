#pragma once

#include <cstdint>

#include "lpmlab/graph.hpp"
#include "lpmlab/latent.hpp"
#include "lpmlab/rng.hpp"
#include "lpmlab/window.hpp"

namespace lpmlab {

/// First n arrival times of a unit-rate Poisson process (partial sums of
/// unit exponentials), strictly increasing.
Vector sample_arrivals(Eigen::Index n, Rng& rng);

/// One point uniform on the boundary increment of the window at time t:
/// a spatial facet with probability p (one coordinate pinned at +-g(t)),
/// else the top auxiliary facet. Writes d coordinates and the auxiliary
/// value.
void sample_shell_position(const WindowSchedule& w, double t, Rng& rng, double* coords,
                           double& aux);

/// Arrival-order sampler: node i enters at t_i on the boundary increment.
LatentConfiguration sample_rectangular(Eigen::Index n, const WindowSchedule& w, Rng& rng);

/// Conditional sampler given the last arrival time T: the first n-1 arrival
/// times are i.i.d. Uniform(0, T) sorted, the last is exactly T, and each
/// node is placed on the boundary increment of its own arrival time. Needs
/// n >= 2.
LatentConfiguration sample_rectangular_exchangeable(Eigen::Index n, double T,
                                                    const WindowSchedule& w, Rng& rng);

/// n i.i.d. rows from N(0, sigma2 I_d); arrivals are 1..n, auxiliary 0.
LatentConfiguration sample_exchangeable_gaussian(Eigen::Index n, int d, double sigma2,
                                                 Rng& rng);

/// Draws each dyad {i, j} independently with probability K(|z_i - z_j|),
/// using the dyad's own substream of `seed`; the result is identical for
/// any worker count. The node count is passed to the link for scaled kinds.
GraphSample sample_edges(LatentConfiguration config, const LinkFunction& K,
                         std::uint64_t seed, unsigned workers = 0);

/// Gaussian configuration plus edges through a scaled-graphon link, both
/// driven by `seed`. With p_s = 0 this reproduces the exchangeable Gaussian
/// graph of the base link at the same seed, bit for bit.
GraphSample sample_sparse_graphon(Eigen::Index n, int d, double sigma2, const LinkFunction& K,
                                  std::uint64_t seed);

/// Sub-graph of the nodes with arrival time <= t (a leading block, since
/// arrivals are sorted); identity when t >= t_n, empty when t < t_1.
GraphSample restrict_to_window(const GraphSample& g, double t);

/// Dispatches on the model family: rectangular arrival-order sampling,
/// exchangeable Gaussian, or the scaled-graphon construction. All
/// randomness derives from `seed`.
GraphSample sample_model_graph(const ModelInfo& model, const LinkFunction& K,
                               Eigen::Index n, std::uint64_t seed);

}  // namespace lpmlab
