#include "lpmlab/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpmlab/model.hpp"
#include "lpmlab/version.hpp"

namespace lpmlab {

namespace {

[[noreturn]] void bad_doc(const std::string& what) {
  throw std::runtime_error("document error: " + what);
}

int major_of(const std::string& version) {
  const auto dot = version.find('.');
  if (dot == std::string::npos || dot == 0) bad_doc("malformed schema_version '" + version + "'");
  try {
    return std::stoi(version.substr(0, dot));
  } catch (const std::exception&) {
    bad_doc("malformed schema_version '" + version + "'");
  }
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (const char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

const Json& require(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) bad_doc(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

void check_schema_version(const Json& doc) {
  if (!doc.is_object()) bad_doc("expected a JSON object");
  const auto it = doc.find("schema_version");
  if (it == doc.end() || !it->is_string()) bad_doc("missing schema_version");
  const int major = major_of(it->get<std::string>());
  if (major != kSchemaMajor) {
    bad_doc("unsupported schema_version '" + it->get<std::string>() + "' (this build reads " +
            std::to_string(kSchemaMajor) + ".x)");
  }
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) bad_doc("matrix must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  if (n == 0) return Matrix(0, 0);
  if (!j[0].is_array()) bad_doc("matrix rows must be arrays");
  const auto d = static_cast<Eigen::Index>(j[0].size());
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      bad_doc("matrix rows must all have the same length");
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) bad_doc("matrix entries must be numbers");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) bad_doc("vector must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto& x = j[static_cast<std::size_t>(i)];
    if (!x.is_number()) bad_doc("vector entries must be numbers");
    v(i) = x.get<double>();
  }
  return v;
}

Json graph_to_json(const GraphSample& g) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["meta"] = Json{{"code_version", kVersion},
                     {"model", model_descriptor(g.config.model)},
                     {"link", g.link},
                     {"n", g.n()},
                     {"seed", g.seed}};
  doc["arrivals"] = vector_to_json(g.config.arrivals);
  doc["aux"] = vector_to_json(g.config.aux);
  doc["positions"] = matrix_to_json(g.config.positions);
  Json edges = Json::array();
  const Eigen::Index n = g.n();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (g.adjacency(i, j) != 0) edges.push_back(Json::array({i, j}));
    }
  }
  doc["edges"] = std::move(edges);
  return doc;
}

GraphSample graph_from_json(const Json& doc) {
  check_schema_version(doc);
  const Json& meta = require(doc, "meta");
  if (!meta.is_object()) bad_doc("meta must be an object");
  const Json& jn = require(meta, "n");
  if (!jn.is_number_integer()) bad_doc("meta.n must be an integer");
  const auto n = jn.get<Eigen::Index>();
  if (n < 1) bad_doc("meta.n must be >= 1");

  GraphSample g;
  g.seed = meta.contains("seed") ? meta["seed"].get<std::uint64_t>() : 0;
  g.link = meta.contains("link") ? meta["link"].get<std::string>() : std::string();
  try {
    g.config.model = parse_model(require(meta, "model").get<std::string>());
  } catch (const std::invalid_argument& e) {
    bad_doc(std::string("bad model descriptor: ") + e.what());
  }

  g.adjacency.setZero(n, n);
  const Json& edges = require(doc, "edges");
  if (!edges.is_array()) bad_doc("edges must be an array");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      bad_doc("edges must be [i, j] integer pairs");
    }
    const auto i = e[0].get<Eigen::Index>();
    const auto j = e[1].get<Eigen::Index>();
    if (i < 0 || j <= i || j >= n) bad_doc("edge endpoints must satisfy 0 <= i < j < n");
    g.adjacency(i, j) = 1;
    g.adjacency(j, i) = 1;
  }

  if (doc.contains("positions")) {
    g.config.positions = matrix_from_json(doc["positions"]);
    if (g.config.positions.rows() != 0 && g.config.positions.rows() != n) {
      bad_doc("positions row count differs from meta.n");
    }
  }
  if (doc.contains("aux")) {
    g.config.aux = vector_from_json(doc["aux"]);
    if (g.config.aux.size() != 0 && g.config.aux.size() != n) {
      bad_doc("aux length differs from meta.n");
    }
  }
  if (doc.contains("arrivals")) {
    g.config.arrivals = vector_from_json(doc["arrivals"]);
    if (g.config.arrivals.size() != 0 && g.config.arrivals.size() != n) {
      bad_doc("arrivals length differs from meta.n");
    }
  }
  return g;
}

Json fit_config_to_json(const FitConfig& cfg) {
  const char* init = "mds";
  if (cfg.init == InitStrategy::Random) init = "random";
  if (cfg.init == InitStrategy::Provided) init = "provided";
  return Json{{"max_iters", cfg.max_iters},
              {"grad_tol", cfg.grad_tol},
              {"step_init", cfg.step_init},
              {"step_shrink", cfg.step_shrink},
              {"sufficient_increase", cfg.sufficient_increase},
              {"min_step", cfg.min_step},
              {"restarts", cfg.restarts},
              {"init", init}};
}

FitConfig fit_config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("fit config must be a JSON object");
  FitConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "max_iters") {
      cfg.max_iters = value.get<int>();
    } else if (key == "grad_tol") {
      cfg.grad_tol = value.get<double>();
    } else if (key == "step_init") {
      cfg.step_init = value.get<double>();
    } else if (key == "step_shrink") {
      cfg.step_shrink = value.get<double>();
    } else if (key == "sufficient_increase") {
      cfg.sufficient_increase = value.get<double>();
    } else if (key == "min_step") {
      cfg.min_step = value.get<double>();
    } else if (key == "restarts") {
      cfg.restarts = value.get<int>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "init") {
      const auto name = value.get<std::string>();
      if (name == "mds") {
        cfg.init = InitStrategy::Mds;
      } else if (name == "random") {
        cfg.init = InitStrategy::Random;
      } else {
        throw std::invalid_argument("fit config: unknown init '" + name +
                                    "' (expected mds or random)");
      }
    } else {
      throw std::invalid_argument("fit config: unknown field '" + key + "'");
    }
  }
  return cfg;
}

Json plan_to_json(const ExperimentPlan& plan) {
  Json models = Json::array();
  for (const auto& arm : plan.arms) {
    models.push_back(Json{{"model", model_descriptor(arm.model)}, {"link", arm.link.descriptor()}});
  }
  return Json{{"schema_version", kSchemaVersion},
              {"kind", kind_name(plan.kind)},
              {"models", std::move(models)},
              {"n_grid", plan.n_grid},
              {"replicates", plan.replicates},
              {"seed", plan.seed},
              {"n1", plan.n1},
              {"n2", plan.n2},
              {"dim", plan.fit_dim},
              {"fit", fit_config_to_json(plan.fit)},
              {"output", plan.output_prefix}};
}

ExperimentPlan plan_from_json(const Json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("plan must be a JSON object");
  if (doc.contains("schema_version")) check_schema_version(doc);
  std::vector<std::string> bad;
  ExperimentPlan plan;

  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    bad.push_back("plan needs a string field 'kind'");
  } else {
    try {
      plan.kind = parse_kind(doc["kind"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      bad.push_back(e.what());
    }
  }

  const auto parse_arm = [&bad](const Json& jm, const Json& jl) {
    ModelArm arm;
    bool ok = true;
    try {
      arm.model = parse_model(jm.get<std::string>());
    } catch (const std::exception& e) {
      bad.push_back(std::string("bad model: ") + e.what());
      ok = false;
    }
    try {
      arm.link = LinkFunction::parse(jl.get<std::string>());
    } catch (const std::exception& e) {
      bad.push_back(std::string("bad link: ") + e.what());
      ok = false;
    }
    return std::pair<ModelArm, bool>(std::move(arm), ok);
  };

  if (doc.contains("models")) {
    if (!doc["models"].is_array()) {
      bad.push_back("'models' must be an array of {model, link} objects");
    } else {
      for (const auto& entry : doc["models"]) {
        if (!entry.is_object() || !entry.contains("model") || !entry.contains("link")) {
          bad.push_back("each models[] entry needs 'model' and 'link' strings");
          continue;
        }
        auto [arm, ok] = parse_arm(entry["model"], entry["link"]);
        if (ok) plan.arms.push_back(std::move(arm));
      }
    }
  } else if (doc.contains("model") && doc.contains("link")) {
    auto [arm, ok] = parse_arm(doc["model"], doc["link"]);
    if (ok) plan.arms.push_back(std::move(arm));
  } else {
    bad.push_back("plan needs either 'models' or a 'model'/'link' pair");
  }

  try {
    if (doc.contains("n_grid")) plan.n_grid = doc["n_grid"].get<std::vector<std::int64_t>>();
    if (doc.contains("replicates")) plan.replicates = doc["replicates"].get<int>();
    if (doc.contains("seed")) plan.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("n1")) plan.n1 = doc["n1"].get<std::int64_t>();
    if (doc.contains("n2")) plan.n2 = doc["n2"].get<std::int64_t>();
    if (doc.contains("dim")) plan.fit_dim = doc["dim"].get<int>();
    if (doc.contains("output")) plan.output_prefix = doc["output"].get<std::string>();
    if (doc.contains("fit")) plan.fit = fit_config_from_json(doc["fit"]);
  } catch (const Json::exception& e) {
    bad.push_back(std::string("malformed plan field: ") + e.what());
  }

  if (!bad.empty()) {
    std::string msg = "invalid experiment plan:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw std::invalid_argument(msg);
  }
  return plan;
}

std::string table_to_csv(const RawTable& table) {
  std::string out = "# schema_version=";
  out += kSchemaVersion;
  out += '\n';
  const auto emit_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  };
  emit_row(table.header);
  for (const auto& row : table.rows) emit_row(row);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("error while reading '" + path + "'");
  return content;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory '" + p.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

Json load_json_file(const std::string& path) { return Json::parse(read_text_file(path)); }

void write_report_files(const ExperimentReport& report, const std::string& prefix) {
  if (prefix.empty()) throw std::invalid_argument("output prefix must not be empty");
  write_text_file(prefix + "_raw.csv", table_to_csv(report.raw));
  write_text_file(prefix + "_plot.csv", table_to_csv(report.plot));
  Json doc{{"schema_version", kSchemaVersion},
           {"code_version", kVersion},
           {"kind", kind_name(report.plan.kind)},
           {"plan", plan_to_json(report.plan)},
           {"summary", report.summary}};
  write_text_file(prefix + "_summary.json", doc.dump(2) + "\n");
}

std::string edge_list_text(const GraphSample& g) {
  std::string out;
  const Eigen::Index n = g.n();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (g.adjacency(i, j) != 0) {
        out += std::to_string(i);
        out += ' ';
        out += std::to_string(j);
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace lpmlab
