#pragma once

#include <Eigen/Dense>

#include "lpmlab/model.hpp"

namespace lpmlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Latent state backing a graph: one row of `positions` per node, the
/// auxiliary coordinate that orders arrivals without affecting edges, and
/// strictly increasing arrival times.
struct LatentConfiguration {
  Matrix positions;  // n x d
  Vector aux;        // n
  Vector arrivals;   // n, strictly increasing
  ModelInfo model;

  Eigen::Index n() const { return positions.rows(); }
  int dim() const { return static_cast<int>(positions.cols()); }
};

}  // namespace lpmlab
