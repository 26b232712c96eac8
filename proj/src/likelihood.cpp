#include "lpmlab/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpmlab/embedding.hpp"
#include "lpmlab/stats.hpp"

namespace lpmlab {

namespace {

constexpr double kProbClamp = 1e-12;
constexpr double kCoincident = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

void check_adjacency(const Matrix& z, const AdjacencyMatrix& y) {
  if (y.rows() != y.cols()) throw std::invalid_argument("likelihood: adjacency must be square");
  if (y.rows() != z.rows()) {
    throw std::invalid_argument("likelihood: adjacency size must match the number of rows of z");
  }
}

double log_term(std::uint8_t edge, double prob) {
  if (edge) {
    if (prob == 0.0) return -kInf;
    return std::log(prob < kProbClamp ? kProbClamp : prob);
  }
  if (prob == 1.0) return -kInf;
  const double q = 1.0 - prob;
  return std::log(q < kProbClamp ? kProbClamp : q);
}

}  // namespace

Matrix squared_distances(const Matrix& z) {
  const Eigen::Index n = z.rows();
  Matrix d2 = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = (z.row(i) - z.row(j)).squaredNorm();
      d2(i, j) = v;
      d2(j, i) = v;
    }
  }
  return d2;
}

Matrix link_matrix(const LinkFunction& K, const Matrix& d2) {
  if (d2.rows() != d2.cols()) throw std::invalid_argument("link_matrix: input must be square");
  const Eigen::Index n = d2.rows();
  const std::int64_t n_link = static_cast<std::int64_t>(n);
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (!(d2(i, j) >= 0.0)) {
        throw std::domain_error("link_matrix: squared distances must be >= 0");
      }
      const double v = K.eval(std::sqrt(d2(i, j)), n_link);
      p(i, j) = v;
      p(j, i) = v;
    }
  }
  return p;
}

double log_likelihood(const Matrix& z, const AdjacencyMatrix& y, const LinkFunction& K) {
  check_adjacency(z, y);
  const Eigen::Index n = z.rows();
  const std::int64_t n_link = static_cast<std::int64_t>(n);
  NeumaierSum sum;
  bool degenerate = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double delta = (z.row(i) - z.row(j)).norm();
      const double term = log_term(y(i, j), K.eval(delta, n_link));
      if (term == -kInf) {
        degenerate = true;
      } else {
        sum.add(term);
      }
    }
  }
  return degenerate ? -kInf : sum.value();
}

Matrix log_likelihood_gradient(const Matrix& z, const AdjacencyMatrix& y, const LinkFunction& K,
                               int* skipped_pairs) {
  check_adjacency(z, y);
  const Eigen::Index n = z.rows();
  const Eigen::Index d = z.cols();
  const std::int64_t n_link = static_cast<std::int64_t>(n);

  // Exactly coincident pairs contribute zero (symmetric limit). Polynomial
  // links with a < 2 have a diverging pair weight near zero, so for them the
  // skip radius is widened and skips are reported.
  const double skip_radius = K.gradient_fragile_at_zero() ? 1e-8 : kCoincident;

  int skipped = 0;
  Matrix grad = Matrix::Zero(n, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double delta = (z.row(i) - z.row(j)).norm();
      if (delta <= skip_radius) {
        if (delta > 0.0) ++skipped;
        continue;
      }
      const double prob = K.eval(delta, n_link);
      const double dk = K.deriv(delta, n_link);
      const double p_low = prob < kProbClamp ? kProbClamp : prob;
      const double q_low = (1.0 - prob) < kProbClamp ? kProbClamp : (1.0 - prob);
      const double fprime = y(i, j) ? dk / p_low : -dk / q_low;
      const double w = fprime / delta;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double diff = z(i, k) - z(j, k);
        grad(i, k) += w * diff;
        grad(j, k) -= w * diff;
      }
    }
  }
  if (skipped_pairs) *skipped_pairs = skipped;
  return grad;
}

namespace {

void check_prob_matrix(const Matrix& p, const char* what) {
  if (p.rows() != p.cols()) throw std::invalid_argument(std::string(what) + ": matrix must be square");
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = p(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error(std::string(what) + ": entries must lie in [0, 1]");
      }
    }
  }
}

}  // namespace

double kl_divergence(const Matrix& p, const Matrix& q) {
  check_same_shape(p, q, "kl_divergence");
  check_prob_matrix(p, "kl_divergence");
  check_prob_matrix(q, "kl_divergence");
  NeumaierSum sum;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double a = p(i, j), b = q(i, j);
      double term = 0.0;
      if (a > 0.0) {
        if (b == 0.0) return kInf;
        term += a * std::log(a / b);
      }
      if (a < 1.0) {
        if (b == 1.0) return kInf;
        term += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
      }
      sum.add(term);
    }
  }
  return 2.0 * sum.value();
}

double hellinger_sq(const Matrix& p, const Matrix& q) {
  check_same_shape(p, q, "hellinger_sq");
  check_prob_matrix(p, "hellinger_sq");
  check_prob_matrix(q, "hellinger_sq");
  NeumaierSum sum;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double a = p(i, j), b = q(i, j);
      const double s1 = std::sqrt(a) - std::sqrt(b);
      const double s2 = std::sqrt(1.0 - a) - std::sqrt(1.0 - b);
      sum.add(s1 * s1 + s2 * s2);
    }
  }
  return 2.0 * sum.value();
}

double frobenius_sq(const Matrix& p, const Matrix& q) {
  check_same_shape(p, q, "frobenius_sq");
  NeumaierSum sum;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double diff = p(i, j) - q(i, j);
      sum.add(diff * diff);
    }
  }
  return 2.0 * sum.value();
}

LearnabilityErrors learnability_errors(const Matrix& z_hat, const Matrix& z,
                                       const LinkFunction& K, double e_n) {
  check_same_shape(z_hat, z, "learnability_errors");
  if (!(e_n > 0.0)) throw std::invalid_argument("learnability_errors: e_n must be > 0");
  const double n = static_cast<double>(z.rows());

  LearnabilityErrors err;
  err.pos_err = procrustes_align(z_hat, z).error / n;

  const Matrix d2_hat = squared_distances(z_hat);
  const Matrix d2 = squared_distances(z);
  err.dist_err = frobenius_sq(d2_hat, d2) / (n * n);
  err.prob_err = frobenius_sq(link_matrix(K, d2_hat), link_matrix(K, d2)) / e_n;
  return err;
}

}  // namespace lpmlab
