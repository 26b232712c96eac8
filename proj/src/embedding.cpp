#include "lpmlab/embedding.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lpmlab {

Matrix double_center(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("double_center: matrix must be square");
  if (m.rows() == 0) throw std::invalid_argument("double_center: empty matrix");
  const Vector row_mean = m.rowwise().mean();
  const Eigen::RowVectorXd col_mean = m.colwise().mean();
  const double grand = m.mean();
  Matrix out = m;
  out.rowwise() -= col_mean;
  out.colwise() -= row_mean;
  out.array() += grand;
  return out;
}

Matrix classical_mds(const Matrix& d2, int d, double neg_tol) {
  if (d2.rows() != d2.cols()) throw std::invalid_argument("classical_mds: matrix must be square");
  const Eigen::Index n = d2.rows();
  if (d < 1 || d > n) throw std::invalid_argument("classical_mds: need 1 <= d <= n");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (d2(j, j) != 0.0) throw std::invalid_argument("classical_mds: diagonal must be zero");
    for (Eigen::Index i = 0; i < j; ++i) {
      if (!(d2(i, j) >= 0.0)) throw std::invalid_argument("classical_mds: entries must be >= 0");
      if (std::abs(d2(i, j) - d2(j, i)) > 1e-9 * (1.0 + std::abs(d2(i, j)))) {
        throw std::invalid_argument("classical_mds: matrix must be symmetric");
      }
    }
  }

  const Matrix b = -0.5 * double_center(d2);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  if (eig.info() != Eigen::Success) throw std::runtime_error("classical_mds: eigensolver failed");

  const double scale = d2.norm();
  Matrix out(n, d);
  for (int k = 0; k < d; ++k) {
    // Eigen sorts ascending; column k of the output takes rank-k from the top.
    const Eigen::Index idx = n - 1 - k;
    double lambda = eig.eigenvalues()(idx);
    if (lambda < 0.0) {
      if (lambda < -neg_tol * scale) {
        throw std::runtime_error(
            "classical_mds: distance matrix is not realizable in the requested dimension");
      }
      lambda = 0.0;
    }
    out.col(k) = eig.eigenvectors().col(idx) * std::sqrt(lambda);
  }
  // B's range is orthogonal to the ones vector, so columns are centered up
  // to rounding; enforce it exactly.
  out.rowwise() -= out.colwise().mean();
  return out;
}

AlignmentResult procrustes_align(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("procrustes_align: shapes must match");
  }
  if (a.rows() < 1 || a.cols() < 1) throw std::invalid_argument("procrustes_align: empty input");

  const Eigen::RowVectorXd mean_a = a.colwise().mean();
  const Eigen::RowVectorXd mean_b = b.colwise().mean();
  const Matrix ac = a.rowwise() - mean_a;
  const Matrix bc = b.rowwise() - mean_b;

  const Matrix m = ac.transpose() * bc;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = svd.matrixU();
  Matrix v = svd.matrixV();
  // Deterministic sign convention: the largest-magnitude entry of each left
  // factor column is positive. Keeps U S V^T invariant.
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    Eigen::Index arg = 0;
    u.col(k).cwiseAbs().maxCoeff(&arg);
    if (u(arg, k) < 0.0) {
      u.col(k) = -u.col(k);
      v.col(k) = -v.col(k);
    }
  }

  AlignmentResult result;
  result.rotation = u * v.transpose();
  result.shift = mean_a * result.rotation - mean_b;
  Matrix fitted = a * result.rotation;
  fitted.rowwise() -= result.shift;
  result.error = (fitted - b).squaredNorm();
  return result;
}

Vector top_eigenvalues(const Matrix& z) {
  if (z.rows() < 1 || z.cols() < 1) throw std::invalid_argument("top_eigenvalues: empty input");
  const Matrix zc = z.rowwise() - z.colwise().mean();
  const Matrix s = zc.transpose() * zc;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) throw std::runtime_error("top_eigenvalues: eigensolver failed");
  return eig.eigenvalues().reverse();
}

}  // namespace lpmlab
