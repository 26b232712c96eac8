#pragma once

#include <limits>

#include "lpmlab/latent.hpp"

namespace lpmlab {

/// C M C with C = I - (1/n) 11^T; rows and columns of the result sum to 0.
Matrix double_center(const Matrix& m);

/// Classical multidimensional scaling: eigendecomposition of
/// -0.5 * C D C, top-d eigenpairs, output V sqrt(Lambda), centered.
/// A top-d eigenvalue below -neg_tol * ||D||_F means D is not realizable in
/// dimension d and raises a runtime error; pass neg_tol = infinity to clip
/// instead (lenient mode for surrogate distance matrices). Small negative
/// eigenvalues are clipped to zero either way.
Matrix classical_mds(const Matrix& d2, int d, double neg_tol = 1e-8);

struct AlignmentResult {
  Matrix rotation;            // d x d orthogonal (reflections allowed)
  Eigen::RowVectorXd shift;   // 1 x d
  double error = 0.0;         // ||A T - 1 shift - B||_F^2 at the optimum
};

/// Least-squares alignment of A onto B over the full orthogonal group plus
/// translation. Ties in the singular values are broken deterministically
/// (descending order, largest-magnitude entry of each left factor column
/// made positive).
AlignmentResult procrustes_align(const Matrix& a, const Matrix& b);

/// Eigenvalues of (C Z)^T (C Z) in descending order: the scatter spectrum
/// of the centered configuration.
Vector top_eigenvalues(const Matrix& z);

}  // namespace lpmlab
