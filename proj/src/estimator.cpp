#include "lpmlab/estimator.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "lpmlab/embedding.hpp"
#include "lpmlab/likelihood.hpp"

namespace lpmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_fit_inputs(const AdjacencyMatrix& y, int d, double G) {
  if (y.rows() != y.cols()) throw std::invalid_argument("fit: adjacency must be square");
  if (y.rows() < 2) throw std::invalid_argument("fit: need at least 2 nodes");
  if (d < 1) throw std::invalid_argument("fit: dimension must be >= 1");
  if (!(G > 0.0) || std::isinf(G)) throw std::invalid_argument("fit: G must be finite and > 0");
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    if (y(j, j) != 0) throw std::invalid_argument("fit: adjacency diagonal must be zero");
    for (Eigen::Index i = 0; i < j; ++i) {
      if (y(i, j) > 1 || y(i, j) != y(j, i)) {
        throw std::invalid_argument("fit: adjacency must be symmetric 0/1");
      }
    }
  }
}

Matrix random_ball_config(Eigen::Index n, int d, double G, Rng& rng) {
  Matrix z(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int k = 0; k < d; ++k) {
        z(i, k) = rng.normal();
        norm2 += z(i, k) * z(i, k);
      }
    } while (norm2 == 0.0);
    const double radius = G * std::pow(rng.open_unit(), 1.0 / d);
    z.row(i) *= radius / std::sqrt(norm2);
  }
  return z;
}

}  // namespace

Matrix project_ball(const Matrix& z, double G) {
  if (!(G > 0.0)) throw std::invalid_argument("project_ball: G must be > 0");
  Matrix out = z;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > G) out.row(i) *= G / norm;
  }
  return out;
}

Matrix initialize_positions(const AdjacencyMatrix& y, const LinkFunction& K, int d,
                            InitStrategy strategy, double G, Rng& rng,
                            const Matrix* provided) {
  const Eigen::Index n = y.rows();
  if (y.cols() != n) throw std::invalid_argument("initialize: adjacency must be square");
  if (d < 1) throw std::invalid_argument("initialize: dimension must be >= 1");
  if (!(G > 0.0)) throw std::invalid_argument("initialize: G must be > 0");

  switch (strategy) {
    case InitStrategy::Provided: {
      if (!provided) throw std::invalid_argument("initialize: no provided configuration");
      if (provided->rows() != n || provided->cols() != d) {
        throw std::invalid_argument("initialize: provided configuration has the wrong shape");
      }
      return project_ball(*provided, G);
    }
    case InitStrategy::Random:
      return random_ball_config(n, d, G, rng);
    case InitStrategy::Mds:
      break;
  }

  // Shrink the edge indicator toward 1/2 so both outcomes stay inside the
  // link's range, then invert to a surrogate distance.
  constexpr double kEta = 0.05;
  const std::int64_t n_link = static_cast<std::int64_t>(n);
  const double p_max = K.max_prob(n_link);
  double delta_edge = 0.0, delta_gap = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const double p_raw = pass == 0 ? 1.0 - kEta : kEta;
    const double p_eff = p_raw < p_max ? p_raw : p_max;
    double delta;
    try {
      delta = K.inverse(p_eff, n_link);
    } catch (const std::domain_error&) {
      delta = 2.0 * G;
    }
    if (delta > 2.0 * G) delta = 2.0 * G;
    (pass == 0 ? delta_edge : delta_gap) = delta;
  }

  Matrix d2(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d2(j, j) = 0.0;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double delta = y(i, j) ? delta_edge : delta_gap;
      d2(i, j) = delta * delta;
      d2(j, i) = delta * delta;
    }
  }
  const Matrix z0 = classical_mds(d2, d, std::numeric_limits<double>::infinity());
  return project_ball(z0, G);
}

FitResult fit_restricted_mle(const AdjacencyMatrix& y, const LinkFunction& K, int d, double G,
                             const FitConfig& cfg) {
  check_fit_inputs(y, d, G);
  if (cfg.restarts < 1) throw std::invalid_argument("fit: restarts must be >= 1");
  if (cfg.max_iters < 1) throw std::invalid_argument("fit: max_iters must be >= 1");
  if (!(cfg.step_init > 0.0) || !(cfg.step_shrink > 0.0) || cfg.step_shrink >= 1.0) {
    throw std::invalid_argument("fit: step parameters out of range");
  }

  const auto t0 = std::chrono::steady_clock::now();
  FitResult best;
  best.loglik = -kInf;
  bool any_started = false;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(derive_seed(cfg.seed, 0x66697473ULL, static_cast<std::uint64_t>(restart)));
    const InitStrategy strategy = restart == 0 ? cfg.init : InitStrategy::Random;
    Matrix z = initialize_positions(y, K, d, strategy, G, rng,
                                    cfg.init == InitStrategy::Provided ? &cfg.provided_init
                                                                       : nullptr);
    double ll = log_likelihood(z, y, K);
    if (!std::isfinite(ll)) continue;  // degenerate start, spend the restart
    any_started = true;

    FitResult run;
    run.trace.push_back(ll);
    bool converged = false;
    int iter = 0;
    while (iter < cfg.max_iters) {
      ++iter;
      const Matrix grad = log_likelihood_gradient(z, y, K);
      if (!grad.allFinite()) break;

      // Projected-gradient residual at unit step: reduces to the gradient
      // max-norm in the interior and vanishes at constrained optima.
      const double residual = (project_ball(z + grad, G) - z).cwiseAbs().maxCoeff();
      if (residual < cfg.grad_tol) {
        converged = true;
        break;
      }

      double step = cfg.step_init;
      bool accepted = false;
      while (step >= cfg.min_step) {
        Matrix candidate = project_ball(z + step * grad, G);
        const double gain_ref = (grad.array() * (candidate - z).array()).sum();
        const double candidate_ll = log_likelihood(candidate, y, K);
        if (std::isfinite(candidate_ll) && candidate_ll >= ll + cfg.sufficient_increase * gain_ref) {
          z = std::move(candidate);
          ll = candidate_ll;
          run.trace.push_back(ll);
          accepted = true;
          break;
        }
        step *= cfg.step_shrink;
      }
      if (!accepted) break;  // stalled below min_step without meeting grad_tol
    }

    run.z_hat = std::move(z);
    run.loglik = ll;
    run.iterations = iter;
    run.converged = converged;
    if (ll > best.loglik) best = std::move(run);
  }

  if (!any_started) {
    throw std::runtime_error("fit: every restart began at a degenerate likelihood");
  }
  best.restarts_used = cfg.restarts;
  best.wallclock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return best;
}

GridOracleResult grid_search_oracle(const AdjacencyMatrix& y, const LinkFunction& K, int d,
                                    double G, double resolution) {
  check_fit_inputs(y, d, G);
  if (d != 1) throw std::invalid_argument("grid oracle: only d = 1 is supported");
  if (!(resolution > 0.0)) throw std::invalid_argument("grid oracle: resolution must be > 0");
  const Eigen::Index n = y.rows();
  const std::int64_t n_link = static_cast<std::int64_t>(n);

  // Lattice k * resolution, |k| <= half_points, covering [-2G, 2G].
  const long half_points = static_cast<long>(std::floor(2.0 * G / resolution));
  const long axis_points = 2 * half_points + 1;
  const double evals = std::pow(static_cast<double>(axis_points), static_cast<double>(n - 1));
  if (evals > 1e8) {
    throw std::invalid_argument("grid oracle: instance needs more than 1e8 evaluations");
  }

  // Distances live on the same lattice, so the per-distance log terms can be
  // tabulated once. Range pruning keeps every pair within 2G.
  std::vector<double> term_edge(static_cast<std::size_t>(half_points) + 1);
  std::vector<double> term_gap(static_cast<std::size_t>(half_points) + 1);
  for (long m = 0; m <= half_points; ++m) {
    const double delta = static_cast<double>(m) * resolution;
    const double prob = K.eval(delta, n_link);
    const double p = prob < 1e-12 ? 1e-12 : (prob > 1.0 - 1e-12 ? 1.0 - 1e-12 : prob);
    term_edge[static_cast<std::size_t>(m)] = std::log(p);
    term_gap[static_cast<std::size_t>(m)] = std::log(1.0 - p);
  }

  std::vector<long> k(static_cast<std::size_t>(n), -half_points);
  k[0] = 0;  // translation gauge
  std::vector<long> best_k;
  double best_ll = -kInf;

  for (;;) {
    long lo = 0, hi = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      lo = std::min(lo, k[static_cast<std::size_t>(i)]);
      hi = std::max(hi, k[static_cast<std::size_t>(i)]);
    }
    if (hi - lo <= half_points) {
      double ll = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
          const long dist = std::labs(k[static_cast<std::size_t>(i)] - k[static_cast<std::size_t>(j)]);
          ll += y(i, j) ? term_edge[static_cast<std::size_t>(dist)]
                        : term_gap[static_cast<std::size_t>(dist)];
        }
      }
      if (ll > best_ll) {
        best_ll = ll;
        best_k = k;
      }
    }

    // Odometer over coordinates 1..n-1.
    Eigen::Index digit = 1;
    while (digit < n) {
      if (k[static_cast<std::size_t>(digit)] < half_points) {
        ++k[static_cast<std::size_t>(digit)];
        break;
      }
      k[static_cast<std::size_t>(digit)] = -half_points;
      ++digit;
    }
    if (digit == n) break;
  }

  GridOracleResult result;
  result.loglik = best_ll;
  result.z_star.resize(n, 1);
  long lo = 0, hi = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    lo = std::min(lo, best_k[static_cast<std::size_t>(i)]);
    hi = std::max(hi, best_k[static_cast<std::size_t>(i)]);
  }
  const double center = 0.5 * (static_cast<double>(lo) + static_cast<double>(hi)) * resolution;
  for (Eigen::Index i = 0; i < n; ++i) {
    result.z_star(i, 0) = static_cast<double>(best_k[static_cast<std::size_t>(i)]) * resolution - center;
  }
  return result;
}

}  // namespace lpmlab
