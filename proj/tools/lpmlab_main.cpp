#include <cstdint>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "lpmlab/estimator.hpp"
#include "lpmlab/experiments.hpp"
#include "lpmlab/format.hpp"
#include "lpmlab/likelihood.hpp"
#include "lpmlab/model.hpp"
#include "lpmlab/sampler.hpp"
#include "lpmlab/serialize.hpp"
#include "lpmlab/version.hpp"

namespace {

using namespace lpmlab;

// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation
// error.
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct SampleOptions {
  std::string model_name;
  int d = 1;
  double p = 1.0;
  double sigma2 = 1.0;
  std::string link;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  double T = 0.0;
  std::string out;
  std::string edge_list;
  CLI::Option* d_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* sigma2_opt = nullptr;
  CLI::Option* T_opt = nullptr;
};

struct FitOptions {
  std::string graph_path;
  int dim = 0;
  std::string bound = "auto";
  std::string link;
  int restarts = 1;
  int max_iters = 500;
  double grad_tol = 1e-6;
  std::string init = "mds";
  std::uint64_t seed = 0;
  std::string out;
};

struct ExpOptions {
  std::string kind;
  std::string plan_path;
  std::string out;
};

int cmd_sample(SampleOptions& o) {
  std::string name = o.model_name;
  if (name == "rcm") {
    if (o.d_opt->count() > 0 || o.p_opt->count() > 0) {
      throw std::invalid_argument("rcm fixes d=1 and p=1; do not pass --d or --p");
    }
    o.d = 1;
    o.p = 1.0;
    name = "rect";
  }
  std::string desc;
  if (name == "rect") {
    if (o.sigma2_opt->count() > 0) {
      throw std::invalid_argument("--sigma2 does not apply to rectangular models");
    }
    desc = "rect:d=" + std::to_string(o.d) + ",p=" + format_double(o.p);
  } else {
    if (o.p_opt->count() > 0) {
      throw std::invalid_argument("--p only applies to rectangular models");
    }
    desc = name + ":d=" + std::to_string(o.d) + ",sigma2=" + format_double(o.sigma2);
  }
  const ModelInfo model = parse_model(desc);
  const LinkFunction K = LinkFunction::parse(o.link);

  const bool scaled_link = K.kind() == LinkKind::ScaledGraphon;
  const bool scaled_model = model.family == ModelFamily::SparseGraphon;
  if (scaled_link != scaled_model) {
    throw std::invalid_argument(
        "sgraphon models take sgraphon links and other models do not");
  }

  GraphSample g;
  if (o.T_opt->count() > 0) {
    if (model.family != ModelFamily::Rectangular) {
      throw std::invalid_argument("--T conditioning only applies to rectangular models");
    }
    Rng rng(o.seed);
    LatentConfiguration cfg = sample_rectangular_exchangeable(o.n, o.T, window_of(model), rng);
    cfg.model = model;
    g = sample_edges(std::move(cfg), K, o.seed);
  } else {
    g = sample_model_graph(model, K, o.n, o.seed);
  }

  Json doc = graph_to_json(g);
  if (o.T_opt->count() > 0) doc["meta"]["T"] = o.T;
  write_text_file(o.out, doc.dump(2) + "\n");
  if (!o.edge_list.empty()) write_text_file(o.edge_list, edge_list_text(g));
  std::fprintf(stderr, "sampled %s n=%lld edges=%lld seed=%llu -> %s\n", desc.c_str(),
               static_cast<long long>(g.n()), static_cast<long long>(g.edge_count()),
               static_cast<unsigned long long>(o.seed), o.out.c_str());
  return 0;
}

int cmd_fit(const FitOptions& o) {
  if (o.dim < 0) throw std::invalid_argument("--dim must be >= 1 (or omitted)");
  if (o.restarts < 1) throw std::invalid_argument("--restarts must be >= 1");
  if (o.max_iters < 1) throw std::invalid_argument("--max-iters must be >= 1");
  if (!(o.grad_tol > 0.0)) throw std::invalid_argument("--grad-tol must be > 0");

  const Json doc = load_json_file(o.graph_path);
  const GraphSample g = graph_from_json(doc);
  const auto n = static_cast<std::int64_t>(g.n());

  LinkFunction K = [&] {
    if (!o.link.empty()) return LinkFunction::parse(o.link);
    if (g.link.empty()) {
      throw std::invalid_argument("graph file records no link; pass --link");
    }
    try {
      return LinkFunction::parse(g.link);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("graph file has a bad link descriptor: " + std::string(e.what()));
    }
  }();

  const int dim = o.dim > 0 ? o.dim : g.config.model.d;
  double bound = 0.0;
  if (o.bound == "auto") {
    bound = default_regularity_bound(g.config.model).at(n);
  } else {
    try {
      std::size_t used = 0;
      bound = std::stod(o.bound, &used);
      if (used != o.bound.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw std::invalid_argument("--G must be 'auto' or a positive number");
    }
    if (!(bound > 0.0)) throw std::invalid_argument("--G must be 'auto' or a positive number");
  }

  FitConfig cfg;
  cfg.max_iters = o.max_iters;
  cfg.grad_tol = o.grad_tol;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  if (o.init == "mds") {
    cfg.init = InitStrategy::Mds;
  } else if (o.init == "random") {
    cfg.init = InitStrategy::Random;
  } else {
    throw std::invalid_argument("--init must be mds or random");
  }

  FitResult fit = [&] {
    try {
      return fit_restricted_mle(g.adjacency, K, dim, bound, cfg);
    } catch (const std::invalid_argument& e) {
      // Inputs came from the file, so report a runtime failure, not usage.
      throw std::runtime_error(std::string("fit rejected the graph: ") + e.what());
    }
  }();

  Json out{{"schema_version", kSchemaVersion},
           {"code_version", kVersion},
           {"fit",
            Json{{"z_hat", matrix_to_json(fit.z_hat)},
                 {"loglik", fit.loglik},
                 {"iterations", fit.iterations},
                 {"converged", fit.converged},
                 {"restarts_used", fit.restarts_used}}},
           {"config", Json{{"graph", o.graph_path},
                           {"link", K.descriptor()},
                           {"dim", dim},
                           {"G", bound},
                           {"max_iters", cfg.max_iters},
                           {"grad_tol", cfg.grad_tol},
                           {"restarts", cfg.restarts},
                           {"init", o.init},
                           {"seed", cfg.seed}}}};
  if (g.config.positions.rows() == g.n() && g.config.positions.cols() == dim) {
    const double e_n = natural_dyad_scale(g.config.model, K, n);
    const LearnabilityErrors err =
        learnability_errors(fit.z_hat, g.config.positions, K, e_n);
    out["errors"] = Json{{"pos_err", err.pos_err},
                         {"dist_err", err.dist_err},
                         {"prob_err", err.prob_err},
                         {"dyad_scale", e_n}};
  }
  write_text_file(o.out, out.dump(2) + "\n");
  std::fprintf(stderr, "fit n=%lld dim=%d loglik=%.6f converged=%d iters=%d -> %s\n",
               static_cast<long long>(n), dim, fit.loglik, fit.converged ? 1 : 0,
               fit.iterations, o.out.c_str());
  return 0;
}

int cmd_exp(const ExpOptions& o) {
  const ExperimentKind kind = parse_kind(o.kind);
  const std::string text = read_text_file(o.plan_path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("plan file is not valid JSON: " + std::string(e.what()));
  }
  ExperimentPlan plan = plan_from_json(doc);
  if (plan.kind != kind) {
    throw std::invalid_argument("plan kind '" + kind_name(plan.kind) +
                                "' does not match requested '" + o.kind + "'");
  }
  if (!o.out.empty()) plan.output_prefix = o.out;
  if (plan.output_prefix.empty()) {
    throw std::invalid_argument("plan has no output prefix; set 'output' or pass --out");
  }
  plan.validate_or_throw();
  const ExperimentReport report = run_experiment(plan);
  write_report_files(report, plan.output_prefix);
  std::fprintf(stderr, "%s: %zu raw rows -> %s_{raw,plot}.csv, %s_summary.json\n",
               o.kind.c_str(), report.raw.rows.size(), plan.output_prefix.c_str(),
               plan.output_prefix.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent position random graph laboratory"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SampleOptions so;
  CLI::App* sample = app.add_subcommand("sample", "draw a graph and write it as JSON");
  sample->add_option("--model", so.model_name, "model family: rect, gauss, sgraphon, or rcm")
      ->required()
      ->check(CLI::IsMember({"rect", "gauss", "sgraphon", "rcm"}));
  so.d_opt = sample->add_option("--d", so.d, "latent dimension (default 1)");
  so.p_opt = sample->add_option("--p", so.p, "window growth exponent in [0, 1] (rect)");
  so.sigma2_opt = sample->add_option("--sigma2", so.sigma2, "latent variance (gauss, sgraphon)");
  sample->add_option("--link", so.link, "link descriptor, e.g. poly:C=2,a=3")->required();
  sample->add_option("--n", so.n, "number of nodes")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", so.seed, "RNG seed (default 0)");
  so.T_opt = sample->add_option("--T", so.T, "condition on the last arrival time (rect)");
  sample->add_option("--out", so.out, "output JSON path")->required();
  sample->add_option("--edge-list", so.edge_list, "also write a plain 'i j' edge list");

  FitOptions fo;
  CLI::App* fit = app.add_subcommand("fit", "estimate latent positions from a graph JSON");
  fit->add_option("--graph", fo.graph_path, "graph JSON produced by 'sample'")->required();
  fit->add_option("--dim", fo.dim, "embedding dimension (default: model dimension)");
  fit->add_option("--G", fo.bound, "row-norm cap, a number or 'auto' (default auto)");
  fit->add_option("--link", fo.link, "link descriptor (default: the one in the file)");
  fit->add_option("--restarts", fo.restarts, "optimizer restarts (default 1)");
  fit->add_option("--max-iters", fo.max_iters, "iteration cap per restart (default 500)");
  fit->add_option("--grad-tol", fo.grad_tol, "projected-gradient tolerance (default 1e-6)");
  fit->add_option("--init", fo.init, "first-restart initializer: mds or random");
  fit->add_option("--seed", fo.seed, "RNG seed for restarts (default 0)");
  fit->add_option("--out", fo.out, "output JSON path")->required();

  ExpOptions eo;
  CLI::App* exp = app.add_subcommand("exp", "run an experiment plan");
  exp->add_option("kind", eo.kind,
                  "sparsity, projectivity, learnability, eigenvalues, or regularity")
      ->required();
  exp->add_option("--plan", eo.plan_path, "plan JSON path")->required();
  exp->add_option("--out", eo.out, "output prefix (overrides the plan)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sample->parsed()) return cmd_sample(so);
    if (fit->parsed()) return cmd_fit(fo);
    if (exp->parsed()) return cmd_exp(eo);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
