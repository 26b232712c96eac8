#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "lpmlab/latent.hpp"

namespace lpmlab {

using AdjacencyMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// A sampled simple graph together with the latent state and the seed that
/// regenerates it. Adjacency is dense, symmetric, zero-diagonal.
struct GraphSample {
  AdjacencyMatrix adjacency;
  LatentConfiguration config;
  std::string link;  // descriptor of the link that drew the edges
  std::uint64_t seed = 0;

  Eigen::Index n() const { return adjacency.rows(); }

  std::size_t edge_count() const {
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < adjacency.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) count += adjacency(i, j);
    }
    return count;
  }
};

}  // namespace lpmlab
