#include "lpmlab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpmlab/parallel.hpp"

namespace lpmlab {

namespace {

void check_n(Eigen::Index n, Eigen::Index minimum) {
  if (n < minimum) {
    throw std::invalid_argument("sampler: need at least " + std::to_string(minimum) + " nodes");
  }
}

}  // namespace

Vector sample_arrivals(Eigen::Index n, Rng& rng) {
  check_n(n, 1);
  Vector t(n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += rng.exponential();
    t(i) = acc;
  }
  return t;
}

void sample_shell_position(const WindowSchedule& w, double t, Rng& rng, double* coords,
                           double& aux) {
  const WindowGeometry geom = window_geometry(w, t);
  if (rng.uniform() < w.p) {
    // Spatial facet: expansion happens symmetrically on all 2d sides.
    Eigen::Index axis = static_cast<Eigen::Index>(rng.uniform() * w.d);
    if (axis >= w.d) axis = w.d - 1;
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (int k = 0; k < w.d; ++k) {
      coords[k] = rng.uniform(-geom.halfwidth, geom.halfwidth);
    }
    coords[axis] = sign * geom.halfwidth;
    aux = rng.uniform(0.0, geom.height);
  } else {
    // Top facet: the auxiliary extent grows, position is uniform in the box.
    for (int k = 0; k < w.d; ++k) {
      coords[k] = rng.uniform(-geom.halfwidth, geom.halfwidth);
    }
    aux = geom.height;
  }
}

LatentConfiguration sample_rectangular(Eigen::Index n, const WindowSchedule& w, Rng& rng) {
  check_n(n, 1);
  LatentConfiguration cfg;
  cfg.model = ModelInfo{ModelFamily::Rectangular, w.d, w.p, 1.0};
  cfg.arrivals = sample_arrivals(n, rng);
  cfg.positions.resize(n, w.d);
  cfg.aux.resize(n);
  std::vector<double> coords(static_cast<std::size_t>(w.d));
  for (Eigen::Index i = 0; i < n; ++i) {
    sample_shell_position(w, cfg.arrivals(i), rng, coords.data(), cfg.aux(i));
    for (int k = 0; k < w.d; ++k) cfg.positions(i, k) = coords[static_cast<std::size_t>(k)];
  }
  return cfg;
}

LatentConfiguration sample_rectangular_exchangeable(Eigen::Index n, double T,
                                                    const WindowSchedule& w, Rng& rng) {
  check_n(n, 2);
  if (!(T > 0.0) || std::isinf(T)) {
    throw std::domain_error("sampler: conditioning time T must be finite and > 0");
  }
  LatentConfiguration cfg;
  cfg.model = ModelInfo{ModelFamily::Rectangular, w.d, w.p, 1.0};
  cfg.arrivals.resize(n);
  std::vector<double> times(static_cast<std::size_t>(n) - 1);
  for (auto& v : times) v = rng.uniform(0.0, T) ;
  std::sort(times.begin(), times.end());
  for (Eigen::Index i = 0; i + 1 < n; ++i) cfg.arrivals(i) = times[static_cast<std::size_t>(i)];
  cfg.arrivals(n - 1) = T;
  cfg.positions.resize(n, w.d);
  cfg.aux.resize(n);
  std::vector<double> coords(static_cast<std::size_t>(w.d));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = cfg.arrivals(i);
    if (!(t > 0.0)) throw std::runtime_error("sampler: degenerate zero arrival time");
    sample_shell_position(w, t, rng, coords.data(), cfg.aux(i));
    for (int k = 0; k < w.d; ++k) cfg.positions(i, k) = coords[static_cast<std::size_t>(k)];
  }
  return cfg;
}

LatentConfiguration sample_exchangeable_gaussian(Eigen::Index n, int d, double sigma2,
                                                 Rng& rng) {
  check_n(n, 1);
  if (d < 1) throw std::invalid_argument("sampler: dimension d must be >= 1");
  if (!(sigma2 > 0.0) || std::isinf(sigma2)) {
    throw std::invalid_argument("sampler: sigma2 must be finite and > 0");
  }
  LatentConfiguration cfg;
  cfg.model = ModelInfo{ModelFamily::Gaussian, d, 0.0, sigma2};
  const double sigma = std::sqrt(sigma2);
  cfg.positions.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) cfg.positions(i, k) = sigma * rng.normal();
  }
  cfg.aux = Vector::Zero(n);
  cfg.arrivals.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) cfg.arrivals(i) = static_cast<double>(i + 1);
  return cfg;
}

GraphSample sample_edges(LatentConfiguration config, const LinkFunction& K, std::uint64_t seed,
                         unsigned workers) {
  const Eigen::Index n = config.n();
  check_n(n, 1);
  if (config.aux.size() != n || config.arrivals.size() != n) {
    throw std::invalid_argument("sample_edges: configuration arrays disagree on n");
  }
  const std::int64_t n_link = static_cast<std::int64_t>(n);

  GraphSample g;
  g.link = K.descriptor();
  g.seed = seed;
  g.adjacency.setZero(n, n);

  const Matrix& z = config.positions;
  // Row tasks: dyad {i, j} is owned by its smaller endpoint, and every draw
  // comes from the dyad's own substream, so scheduling cannot change output.
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t row) {
        const Eigen::Index i = static_cast<Eigen::Index>(row);
        for (Eigen::Index j = i + 1; j < n; ++j) {
          const double delta = (z.row(i) - z.row(j)).norm();
          const double prob = K.eval(delta, n_link);
          const std::uint8_t y =
              dyad_uniform(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)) < prob
                  ? 1
                  : 0;
          g.adjacency(i, j) = y;
          g.adjacency(j, i) = y;
        }
      },
      workers);

  g.config = std::move(config);
  return g;
}

GraphSample sample_sparse_graphon(Eigen::Index n, int d, double sigma2, const LinkFunction& K,
                                  std::uint64_t seed) {
  if (K.kind() != LinkKind::ScaledGraphon) {
    throw std::invalid_argument("sample_sparse_graphon: link must be a scaled graphon kind");
  }
  Rng rng(seed);
  LatentConfiguration cfg = sample_exchangeable_gaussian(n, d, sigma2, rng);
  cfg.model.family = ModelFamily::SparseGraphon;
  return sample_edges(std::move(cfg), K, seed);
}

GraphSample sample_model_graph(const ModelInfo& model, const LinkFunction& K, Eigen::Index n,
                               std::uint64_t seed) {
  switch (model.family) {
    case ModelFamily::Rectangular: {
      Rng rng(seed);
      LatentConfiguration cfg = sample_rectangular(n, window_of(model), rng);
      cfg.model = model;
      return sample_edges(std::move(cfg), K, seed);
    }
    case ModelFamily::Gaussian: {
      Rng rng(seed);
      LatentConfiguration cfg = sample_exchangeable_gaussian(n, model.d, model.sigma2, rng);
      return sample_edges(std::move(cfg), K, seed);
    }
    case ModelFamily::SparseGraphon:
      return sample_sparse_graphon(n, model.d, model.sigma2, K, seed);
  }
  throw std::logic_error("sample_model_graph: unknown model family");
}

GraphSample restrict_to_window(const GraphSample& g, double t) {
  if (std::isnan(t) || t <= 0.0) {
    throw std::domain_error("restrict_to_window: t must be > 0");
  }
  const Eigen::Index n = g.n();
  Eigen::Index keep = 0;
  while (keep < n && g.config.arrivals(keep) <= t) ++keep;

  GraphSample out;
  out.link = g.link;
  out.seed = g.seed;
  out.adjacency = g.adjacency.topLeftCorner(keep, keep);
  out.config.model = g.config.model;
  out.config.positions = g.config.positions.topRows(keep);
  out.config.aux = g.config.aux.head(keep);
  out.config.arrivals = g.config.arrivals.head(keep);
  return out;
}

}  // namespace lpmlab
