#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpmlab/estimator.hpp"
#include "lpmlab/link.hpp"
#include "lpmlab/model.hpp"

namespace lpmlab {

enum class ExperimentKind {
  Sparsity,       ///< edge counts vs n, log-log slope per model
  Projectivity,   ///< restriction vs direct sampling at a smaller size
  Learnability,   ///< recovery error of the restricted MLE vs n
  Eigenvalues,    ///< scaled Gram spectra of latent configurations
  Regularity,     ///< norm exceedance frequencies for latent positions
};

std::string kind_name(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);

/// One model/link pairing studied by an experiment.
struct ModelArm {
  ModelInfo model;
  LinkFunction link;

  std::string label() const;
};

struct ExperimentPlan {
  ExperimentKind kind = ExperimentKind::Sparsity;
  std::vector<ModelArm> arms;
  std::vector<std::int64_t> n_grid;
  int replicates = 0;
  std::uint64_t seed = 0;

  // Projectivity only: restricted size n1, direct size n2.
  std::int64_t n1 = 2;
  std::int64_t n2 = 8;

  // Learnability only.
  FitConfig fit;
  int fit_dim = 0;  ///< 0 means "use the model dimension"

  std::string output_prefix;

  /// All violated requirements, empty when the plan is runnable.
  std::vector<std::string> validate() const;
  void validate_or_throw() const;
};

/// Rectangular table with stringified cells, ready for CSV output.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentReport {
  ExperimentPlan plan;
  RawTable raw;            ///< one row per elementary observation
  RawTable plot;           ///< x,y,series triples for quick plotting
  nlohmann::json summary;  ///< aggregate statistics and verdict flags
};

/// Runs the plan to completion. Deterministic for a fixed plan,
/// independent of the worker count.
ExperimentReport run_experiment(const ExperimentPlan& plan);

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of log(value) against log(n).
/// Requires at least three points and strictly positive inputs.
SlopeFit fit_log_log_slope(std::span<const double> ns,
                           std::span<const double> values);

/// Total variation distance between two empirical distributions over
/// pattern ids 0..n_patterns-1.
double tv_distance(const std::vector<std::int64_t>& counts_a,
                   const std::vector<std::int64_t>& counts_b);

}  // namespace lpmlab
