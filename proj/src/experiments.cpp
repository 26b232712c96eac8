#include "lpmlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>

#include "lpmlab/embedding.hpp"
#include "lpmlab/format.hpp"
#include "lpmlab/likelihood.hpp"
#include "lpmlab/parallel.hpp"
#include "lpmlab/sampler.hpp"
#include "lpmlab/stats.hpp"

namespace lpmlab {

namespace {

using Json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kPermutations = 999;
constexpr double kPermAlpha = 0.01;

std::uint64_t task_seed(const ExperimentPlan& plan, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c) {
  return derive_seed(plan.seed, 0x4C504D4CULL, static_cast<std::uint64_t>(plan.kind) + 1, a, b, c);
}

std::string cell(double v) { return format_double(v); }
std::string cell(std::int64_t v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }
std::string cell(std::uint64_t v) { return format_u64(v); }
std::string cell(std::string v) { return v; }

template <typename... Ts>
void add_row(RawTable& t, Ts&&... vs) {
  std::vector<std::string> row;
  row.reserve(sizeof...(Ts));
  (row.push_back(cell(std::forward<Ts>(vs))), ...);
  t.rows.push_back(std::move(row));
}

double expected_sparsity_slope(const ModelArm& arm) {
  switch (arm.model.family) {
    case ModelFamily::Rectangular:
      return 2.0 - arm.model.p;
    case ModelFamily::Gaussian:
      return 2.0;
    case ModelFamily::SparseGraphon:
      return 2.0 - arm.link.p_s();
  }
  return kNaN;
}

/// Dyad indicator pattern of the top-left m x m block, bits in (i, j) lex
/// order over i < j.
int pattern_of(const AdjacencyMatrix& a, Eigen::Index m) {
  int bits = 0;
  int k = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j, ++k) {
      if (a(i, j) != 0) bits |= 1 << k;
    }
  }
  return bits;
}

std::vector<std::int64_t> pattern_counts(const std::vector<int>& patterns, std::size_t begin,
                                         std::size_t end, int n_patterns) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n_patterns), 0);
  for (std::size_t i = begin; i < end; ++i) {
    counts[static_cast<std::size_t>(patterns[i])] += 1;
  }
  return counts;
}

double permutation_p_value(std::vector<int> pooled, std::size_t n_a, int n_patterns,
                           double tv_obs, Rng& rng) {
  int exceed = 0;
  for (int b = 0; b < kPermutations; ++b) {
    for (std::size_t i = pooled.size() - 1; i > 0; --i) {
      auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
      if (j > i) j = i;
      std::swap(pooled[i], pooled[j]);
    }
    const auto ca = pattern_counts(pooled, 0, n_a, n_patterns);
    const auto cb = pattern_counts(pooled, n_a, pooled.size(), n_patterns);
    if (tv_distance(ca, cb) >= tv_obs - 1e-15) ++exceed;
  }
  return (1.0 + exceed) / (kPermutations + 1.0);
}

Json slope_json(const std::vector<double>& ns, const std::vector<double>& values) {
  try {
    const SlopeFit f = fit_log_log_slope(ns, values);
    return Json{{"slope", f.slope}, {"stderr", f.stderr_slope}, {"intercept", f.intercept}};
  } catch (const std::exception&) {
    return Json();  // null: degenerate inputs (zeros or too few points)
  }
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] <= v[i - 1])) return false;
  }
  return true;
}

ExperimentReport run_sparsity(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  rep.raw.header = {"model", "n", "replicate", "seed", "edges"};
  rep.plot.header = {"x", "y", "series"};

  const std::size_t n_arms = plan.arms.size();
  const std::size_t n_sizes = plan.n_grid.size();
  const auto reps = static_cast<std::size_t>(plan.replicates);
  std::vector<double> edges(n_arms * n_sizes * reps, 0.0);

  parallel_for(edges.size(), [&](std::size_t idx) {
    const std::size_t a = idx / (n_sizes * reps);
    const std::size_t g = (idx / reps) % n_sizes;
    const std::size_t r = idx % reps;
    const std::int64_t n = plan.n_grid[g];
    const std::uint64_t seed = task_seed(plan, a, static_cast<std::uint64_t>(n), r);
    const GraphSample graph =
        sample_model_graph(plan.arms[a].model, plan.arms[a].link, n, seed);
    edges[idx] = static_cast<double>(graph.edge_count());
  });

  Json arms_json = Json::array();
  for (std::size_t a = 0; a < n_arms; ++a) {
    const std::string label = plan.arms[a].label();
    std::vector<double> ns;
    std::vector<double> means;
    for (std::size_t g = 0; g < n_sizes; ++g) {
      const std::int64_t n = plan.n_grid[g];
      std::vector<double> per_rep(reps);
      for (std::size_t r = 0; r < reps; ++r) {
        const std::size_t idx = a * n_sizes * reps + g * reps + r;
        per_rep[r] = edges[idx];
        add_row(rep.raw, label, n, static_cast<std::int64_t>(r),
                task_seed(plan, a, static_cast<std::uint64_t>(n), r), edges[idx]);
      }
      const double m = mean(per_rep);
      ns.push_back(static_cast<double>(n));
      means.push_back(m);
      add_row(rep.plot, static_cast<double>(n), m, label);
    }
    Json arm_json{{"label", label},
                  {"model", model_descriptor(plan.arms[a].model)},
                  {"link", plan.arms[a].link.descriptor()},
                  {"n", ns},
                  {"mean_edges", means},
                  {"expected_slope", expected_sparsity_slope(plan.arms[a])},
                  {"fit", slope_json(ns, means)}};
    arms_json.push_back(std::move(arm_json));
  }
  rep.summary = Json{{"arms", std::move(arms_json)}};
  return rep;
}

ExperimentReport run_projectivity(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  rep.raw.header = {"arm", "replicate", "seed", "pattern", "dyad12"};
  rep.plot.header = {"x", "y", "series"};

  const ModelArm& arm = plan.arms.front();
  const auto reps = static_cast<std::size_t>(plan.replicates);
  const int n_dyads = static_cast<int>(plan.n1 * (plan.n1 - 1) / 2);
  const int n_patterns = 1 << n_dyads;

  // Task layout: [0, reps) draws at size n1, [reps, 2*reps) draws at size n2
  // and keeps the leading n1 x n1 block.
  std::vector<int> patterns(2 * reps, 0);
  parallel_for(patterns.size(), [&](std::size_t idx) {
    const std::size_t which = idx / reps;
    const std::size_t r = idx % reps;
    const std::int64_t n = which == 0 ? plan.n1 : plan.n2;
    const std::uint64_t seed = task_seed(plan, which, static_cast<std::uint64_t>(n), r);
    const GraphSample g = sample_model_graph(arm.model, arm.link, n, seed);
    patterns[idx] = pattern_of(g.adjacency, plan.n1);
  });

  static const char* kArmNames[2] = {"direct", "restricted"};
  for (std::size_t idx = 0; idx < patterns.size(); ++idx) {
    const std::size_t which = idx / reps;
    const std::size_t r = idx % reps;
    const std::int64_t n = which == 0 ? plan.n1 : plan.n2;
    add_row(rep.raw, std::string(kArmNames[which]), static_cast<std::int64_t>(r),
            task_seed(plan, which, static_cast<std::uint64_t>(n), r), patterns[idx],
            (patterns[idx] & 1) != 0);
  }

  const auto direct_counts = pattern_counts(patterns, 0, reps, n_patterns);
  const auto restr_counts = pattern_counts(patterns, reps, 2 * reps, n_patterns);
  const double tv = tv_distance(direct_counts, restr_counts);

  Rng perm_rng(task_seed(plan, 0x7065726DULL, 0, 0));
  const double p_value = permutation_p_value(patterns, reps, n_patterns, tv, perm_rng);

  std::vector<double> freq_direct;
  std::vector<double> freq_restr;
  for (int k = 0; k < n_patterns; ++k) {
    const double fd = static_cast<double>(direct_counts[static_cast<std::size_t>(k)]) /
                      static_cast<double>(reps);
    const double fr = static_cast<double>(restr_counts[static_cast<std::size_t>(k)]) /
                      static_cast<double>(reps);
    freq_direct.push_back(fd);
    freq_restr.push_back(fr);
    add_row(rep.plot, k, fd, std::string("direct"));
    add_row(rep.plot, k, fr, std::string("restricted"));
  }

  // Marginal frequency of the first dyad: bit 0 of the pattern.
  double dyad_direct = 0.0;
  double dyad_restr = 0.0;
  for (int k = 1; k < n_patterns; k += 2) {
    dyad_direct += freq_direct[static_cast<std::size_t>(k)];
    dyad_restr += freq_restr[static_cast<std::size_t>(k)];
  }
  double predicted_ratio = 1.0;
  if (arm.model.family == ModelFamily::SparseGraphon) {
    predicted_ratio =
        std::pow(static_cast<double>(plan.n2) / static_cast<double>(plan.n1), -arm.link.p_s());
  }

  rep.summary = Json{{"arm", arm.label()},
                     {"n1", plan.n1},
                     {"n2", plan.n2},
                     {"patterns", n_patterns},
                     {"freq_direct", freq_direct},
                     {"freq_restricted", freq_restr},
                     {"tv", tv},
                     {"perm_p_value", p_value},
                     {"alpha", kPermAlpha},
                     {"rejected", p_value < kPermAlpha},
                     {"dyad12_direct", dyad_direct},
                     {"dyad12_restricted", dyad_restr},
                     {"dyad12_ratio", dyad_direct > 0.0 ? dyad_restr / dyad_direct : kNaN},
                     {"dyad12_ratio_predicted", predicted_ratio}};
  return rep;
}

struct LearnCell {
  bool failed = false;
  bool converged = false;
  int iterations = 0;
  double loglik = kNaN;
  double pos_err = kNaN;
  double dist_err = kNaN;
  double prob_err = kNaN;
};

ExperimentReport run_learnability(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  rep.raw.header = {"n",      "replicate", "seed",    "failed",   "converged",
                    "iters",  "loglik",    "pos_err", "dist_err", "prob_err"};
  rep.plot.header = {"x", "y", "series"};

  const ModelArm& arm = plan.arms.front();
  const int dim = plan.fit_dim > 0 ? plan.fit_dim : arm.model.d;
  const std::size_t n_sizes = plan.n_grid.size();
  const auto reps = static_cast<std::size_t>(plan.replicates);
  std::vector<LearnCell> cells(n_sizes * reps);

  parallel_for(cells.size(), [&](std::size_t idx) {
    const std::size_t g = idx / reps;
    const std::size_t r = idx % reps;
    const std::int64_t n = plan.n_grid[g];
    const std::uint64_t seed = task_seed(plan, g, static_cast<std::uint64_t>(n), r);
    LearnCell& c = cells[idx];
    try {
      const GraphSample graph = sample_model_graph(arm.model, arm.link, n, seed);
      FitConfig fc = plan.fit;
      fc.seed = derive_seed(seed, 0x666974ULL);
      const double bound = default_regularity_bound(arm.model).at(n);
      const FitResult fit = fit_restricted_mle(graph.adjacency, arm.link, dim, bound, fc);
      c.converged = fit.converged;
      c.iterations = fit.iterations;
      c.loglik = fit.loglik;
      if (dim == arm.model.d) {
        const double e_n = natural_dyad_scale(arm.model, arm.link, n);
        const LearnabilityErrors err =
            learnability_errors(fit.z_hat, graph.config.positions, arm.link, e_n);
        c.pos_err = err.pos_err;
        c.dist_err = err.dist_err;
        c.prob_err = err.prob_err;
      }
    } catch (const std::exception&) {
      c.failed = true;
    }
  });

  std::vector<double> med_pos, med_dist, med_prob, fail_rate, conv_rate;
  for (std::size_t g = 0; g < n_sizes; ++g) {
    const std::int64_t n = plan.n_grid[g];
    std::vector<double> pos, dist, prob;
    int failures = 0;
    int converged = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const LearnCell& c = cells[g * reps + r];
      add_row(rep.raw, n, static_cast<std::int64_t>(r),
              task_seed(plan, g, static_cast<std::uint64_t>(n), r), c.failed, c.converged,
              c.iterations, c.loglik, c.pos_err, c.dist_err, c.prob_err);
      if (c.failed) {
        ++failures;
        continue;
      }
      if (c.converged) ++converged;
      pos.push_back(c.pos_err);
      dist.push_back(c.dist_err);
      prob.push_back(c.prob_err);
    }
    const double denom = static_cast<double>(reps);
    fail_rate.push_back(failures / denom);
    conv_rate.push_back(converged / denom);
    med_pos.push_back(pos.empty() ? kNaN : median(pos));
    med_dist.push_back(dist.empty() ? kNaN : median(dist));
    med_prob.push_back(prob.empty() ? kNaN : median(prob));
    add_row(rep.plot, static_cast<double>(n), med_pos.back(), std::string("pos_err"));
    add_row(rep.plot, static_cast<double>(n), med_dist.back(), std::string("dist_err"));
    add_row(rep.plot, static_cast<double>(n), med_prob.back(), std::string("prob_err"));
  }

  std::vector<double> ns;
  for (const auto n : plan.n_grid) ns.push_back(static_cast<double>(n));
  rep.summary = Json{{"arm", arm.label()},
                     {"dim", dim},
                     {"n", ns},
                     {"median_pos_err", med_pos},
                     {"median_dist_err", med_dist},
                     {"median_prob_err", med_prob},
                     {"failure_rate", fail_rate},
                     {"converged_rate", conv_rate},
                     {"pos_err_nonincreasing", nonincreasing(med_pos)},
                     {"dist_err_nonincreasing", nonincreasing(med_dist)},
                     {"prob_err_nonincreasing", nonincreasing(med_prob)},
                     {"pos_err_fit", slope_json(ns, med_pos)},
                     {"dist_err_fit", slope_json(ns, med_dist)},
                     {"prob_err_fit", slope_json(ns, med_prob)}};
  return rep;
}

ExperimentReport run_eigenvalues(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  rep.raw.header = {"n", "replicate", "seed", "component", "scaled_lambda"};
  rep.plot.header = {"x", "y", "series"};

  const ModelArm& arm = plan.arms.front();
  const int d = arm.model.d;
  const std::size_t n_sizes = plan.n_grid.size();
  const auto reps = static_cast<std::size_t>(plan.replicates);
  std::vector<Vector> spectra(n_sizes * reps);

  parallel_for(spectra.size(), [&](std::size_t idx) {
    const std::size_t g = idx / reps;
    const std::size_t r = idx % reps;
    const std::int64_t n = plan.n_grid[g];
    const std::uint64_t seed = task_seed(plan, g, static_cast<std::uint64_t>(n), r);
    Rng rng(seed);
    LatentConfiguration cfg;
    double scale = 0.0;
    if (arm.model.family == ModelFamily::Rectangular) {
      const WindowSchedule w = window_of(arm.model);
      cfg = sample_rectangular(n, w, rng);
      const double g_n = w.halfwidth(static_cast<double>(n));
      scale = static_cast<double>(n) * g_n * g_n;
    } else {
      cfg = sample_exchangeable_gaussian(n, d, arm.model.sigma2, rng);
      scale = static_cast<double>(n) * arm.model.sigma2;
    }
    spectra[idx] = top_eigenvalues(cfg.positions) / scale;
  });

  Json mean_rows = Json::array();
  Json sd_rows = Json::array();
  std::vector<std::vector<double>> means_by_component(static_cast<std::size_t>(d));
  for (std::size_t g = 0; g < n_sizes; ++g) {
    const std::int64_t n = plan.n_grid[g];
    std::vector<double> m_row, s_row;
    for (int k = 0; k < d; ++k) {
      std::vector<double> vals(reps);
      for (std::size_t r = 0; r < reps; ++r) vals[r] = spectra[g * reps + r](k);
      const double m = mean(vals);
      m_row.push_back(m);
      s_row.push_back(std::sqrt(sample_variance(vals)));
      means_by_component[static_cast<std::size_t>(k)].push_back(m);
      add_row(rep.plot, static_cast<double>(n), m, "lambda" + std::to_string(k + 1));
    }
    for (std::size_t r = 0; r < reps; ++r) {
      for (int k = 0; k < d; ++k) {
        add_row(rep.raw, n, static_cast<std::int64_t>(r),
                task_seed(plan, g, static_cast<std::uint64_t>(n), r), k + 1,
                spectra[g * reps + r](k));
      }
    }
    mean_rows.push_back(m_row);
    sd_rows.push_back(s_row);
  }

  std::vector<double> cv;
  for (int k = 0; k < d; ++k) {
    const auto& v = means_by_component[static_cast<std::size_t>(k)];
    if (v.size() < 2) {
      cv.push_back(0.0);
    } else {
      cv.push_back(std::sqrt(sample_variance(v)) / mean(v));
    }
  }

  std::vector<double> ns;
  for (const auto n : plan.n_grid) ns.push_back(static_cast<double>(n));
  rep.summary = Json{
      {"arm", arm.label()},
      {"scaling",
       arm.model.family == ModelFamily::Rectangular ? "n*g(n)^2" : "n*sigma2"},
      {"n", ns},
      {"mean_scaled", mean_rows},
      {"sd_scaled", sd_rows},
      {"cv_across_n", cv}};
  return rep;
}

struct RegularityCell {
  double max_norm = 0.0;
  bool exceed_margin = false;
  bool exceed_bound = false;
};

ExperimentReport run_regularity(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  rep.raw.header = {"n", "replicate", "seed", "max_norm", "exceed_margin", "exceed_bound"};
  rep.plot.header = {"x", "y", "series"};

  const ModelArm& arm = plan.arms.front();
  const WindowSchedule w = window_of(arm.model);
  const double sqrt_d = std::sqrt(static_cast<double>(arm.model.d));
  const std::size_t n_sizes = plan.n_grid.size();
  const auto reps = static_cast<std::size_t>(plan.replicates);
  std::vector<RegularityCell> cells(n_sizes * reps);

  parallel_for(cells.size(), [&](std::size_t idx) {
    const std::size_t g = idx / reps;
    const std::size_t r = idx % reps;
    const std::int64_t n = plan.n_grid[g];
    const double nd = static_cast<double>(n);
    const std::uint64_t seed = task_seed(plan, g, static_cast<std::uint64_t>(n), r);
    Rng rng(seed);
    const LatentConfiguration cfg = sample_rectangular(n, w, rng);
    RegularityCell& c = cells[idx];
    c.max_norm = cfg.positions.rowwise().norm().maxCoeff();
    const double margin = sqrt_d * w.halfwidth(nd + std::sqrt(nd * std::log(nd)));
    const double bound = 2.0 * sqrt_d * w.halfwidth(nd);
    c.exceed_margin = c.max_norm > margin;
    c.exceed_bound = c.max_norm > bound;
  });

  std::vector<double> freq_margin, freq_bound, margin_bound, margin_se;
  std::vector<bool> within;
  for (std::size_t g = 0; g < n_sizes; ++g) {
    const std::int64_t n = plan.n_grid[g];
    std::int64_t over_margin = 0;
    std::int64_t over_bound = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const RegularityCell& c = cells[g * reps + r];
      add_row(rep.raw, n, static_cast<std::int64_t>(r),
              task_seed(plan, g, static_cast<std::uint64_t>(n), r), c.max_norm, c.exceed_margin,
              c.exceed_bound);
      if (c.exceed_margin) ++over_margin;
      if (c.exceed_bound) ++over_bound;
    }
    const double denom = static_cast<double>(reps);
    const double f1 = static_cast<double>(over_margin) / denom;
    const double f2 = static_cast<double>(over_bound) / denom;
    const double se = std::sqrt(f1 * (1.0 - f1) / denom);
    const double target = 1.0 / std::log(static_cast<double>(n));
    freq_margin.push_back(f1);
    freq_bound.push_back(f2);
    margin_se.push_back(se);
    margin_bound.push_back(target);
    within.push_back(f1 <= target + 3.0 * se);
    add_row(rep.plot, static_cast<double>(n), f1, std::string("exceed_margin"));
    add_row(rep.plot, static_cast<double>(n), target, std::string("margin_bound"));
    add_row(rep.plot, static_cast<double>(n), f2, std::string("exceed_bound"));
  }

  std::vector<double> ns;
  for (const auto n : plan.n_grid) ns.push_back(static_cast<double>(n));
  rep.summary = Json{{"arm", arm.label()},
                     {"n", ns},
                     {"exceed_margin_freq", freq_margin},
                     {"margin_bound", margin_bound},
                     {"margin_se", margin_se},
                     {"within_margin", within},
                     {"exceed_bound_freq", freq_bound},
                     {"bound_freq_nonincreasing", nonincreasing(freq_bound)}};
  return rep;
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Sparsity:
      return "sparsity";
    case ExperimentKind::Projectivity:
      return "projectivity";
    case ExperimentKind::Learnability:
      return "learnability";
    case ExperimentKind::Eigenvalues:
      return "eigenvalues";
    case ExperimentKind::Regularity:
      return "regularity";
  }
  throw std::logic_error("kind_name: unknown kind");
}

ExperimentKind parse_kind(const std::string& name) {
  if (name == "sparsity") return ExperimentKind::Sparsity;
  if (name == "projectivity") return ExperimentKind::Projectivity;
  if (name == "learnability") return ExperimentKind::Learnability;
  if (name == "eigenvalues") return ExperimentKind::Eigenvalues;
  if (name == "regularity") return ExperimentKind::Regularity;
  throw std::invalid_argument(
      "unknown experiment kind '" + name +
      "' (expected sparsity, projectivity, learnability, eigenvalues, or regularity)");
}

std::string ModelArm::label() const { return model_descriptor(model) + "|" + link.descriptor(); }

std::vector<std::string> ExperimentPlan::validate() const {
  std::vector<std::string> bad;
  if (arms.empty()) bad.push_back("plan needs at least one model arm");
  if (arms.size() > 1 && kind != ExperimentKind::Sparsity) {
    bad.push_back("only sparsity plans may compare multiple models");
  }
  for (const auto& arm : arms) {
    const bool scaled_link = arm.link.kind() == LinkKind::ScaledGraphon;
    const bool scaled_model = arm.model.family == ModelFamily::SparseGraphon;
    if (scaled_link != scaled_model) {
      bad.push_back("scaled links pair with the sparse graphon family and vice versa (arm " +
                    arm.label() + ")");
    }
    if (kind == ExperimentKind::Regularity && arm.model.family != ModelFamily::Rectangular) {
      bad.push_back("regularity plans need a rectangular model");
    }
    if (kind == ExperimentKind::Eigenvalues && arm.model.family == ModelFamily::SparseGraphon) {
      bad.push_back("eigenvalue plans need a rectangular or Gaussian model");
    }
  }
  if (replicates < 30) bad.push_back("replicates must be at least 30");
  const std::size_t min_sizes =
      (kind == ExperimentKind::Sparsity || kind == ExperimentKind::Learnability) ? 3 : 1;
  if (kind != ExperimentKind::Projectivity) {
    if (n_grid.size() < min_sizes) {
      bad.push_back("n_grid needs at least " + std::to_string(min_sizes) + " sizes");
    }
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 2) bad.push_back("every n in n_grid must be >= 2");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
        bad.push_back("n_grid must be strictly increasing");
      }
    }
  } else {
    if (n1 != 2 && n1 != 3) bad.push_back("projectivity needs n1 in {2, 3}");
    if (n2 <= n1) bad.push_back("projectivity needs n2 > n1");
    if (n2 > 20 * n1) bad.push_back("projectivity needs n2 <= 20 * n1");
  }
  if (kind == ExperimentKind::Learnability) {
    if (fit.max_iters < 1) bad.push_back("fit.max_iters must be >= 1");
    if (fit.restarts < 1) bad.push_back("fit.restarts must be >= 1");
    if (!(fit.grad_tol > 0.0)) bad.push_back("fit.grad_tol must be > 0");
    if (fit_dim < 0) bad.push_back("fit dimension must be >= 0 (0 uses the model dimension)");
  }
  return bad;
}

void ExperimentPlan::validate_or_throw() const {
  const auto bad = validate();
  if (bad.empty()) return;
  std::string msg = "invalid experiment plan:";
  for (const auto& b : bad) msg += "\n  - " + b;
  throw std::invalid_argument(msg);
}

ExperimentReport run_experiment(const ExperimentPlan& plan) {
  plan.validate_or_throw();
  switch (plan.kind) {
    case ExperimentKind::Sparsity:
      return run_sparsity(plan);
    case ExperimentKind::Projectivity:
      return run_projectivity(plan);
    case ExperimentKind::Learnability:
      return run_learnability(plan);
    case ExperimentKind::Eigenvalues:
      return run_eigenvalues(plan);
    case ExperimentKind::Regularity:
      return run_regularity(plan);
  }
  throw std::logic_error("run_experiment: unknown kind");
}

SlopeFit fit_log_log_slope(std::span<const double> ns, std::span<const double> values) {
  if (ns.size() != values.size()) {
    throw std::invalid_argument("fit_log_log_slope: size mismatch");
  }
  if (ns.size() < 3) throw std::invalid_argument("fit_log_log_slope: need at least 3 points");
  std::vector<double> lx(ns.size()), ly(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] > 0.0) || !(values[i] > 0.0)) {
      throw std::invalid_argument("fit_log_log_slope: inputs must be strictly positive");
    }
    lx[i] = std::log(ns[i]);
    ly[i] = std::log(values[i]);
  }
  const LineFit f = fit_line(lx, ly);
  return SlopeFit{f.slope, f.slope_stderr, f.intercept};
}

double tv_distance(const std::vector<std::int64_t>& counts_a,
                   const std::vector<std::int64_t>& counts_b) {
  if (counts_a.size() != counts_b.size()) {
    throw std::invalid_argument("tv_distance: count vectors must have equal length");
  }
  std::int64_t total_a = 0;
  std::int64_t total_b = 0;
  for (const auto c : counts_a) total_a += c;
  for (const auto c : counts_b) total_b += c;
  if (total_a <= 0 || total_b <= 0) {
    throw std::invalid_argument("tv_distance: empty samples");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < counts_a.size(); ++k) {
    acc += std::abs(static_cast<double>(counts_a[k]) / static_cast<double>(total_a) -
                    static_cast<double>(counts_b[k]) / static_cast<double>(total_b));
  }
  return 0.5 * acc;
}

}  // namespace lpmlab
