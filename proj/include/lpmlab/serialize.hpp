#pragma once

#include <string>

#include "json.hpp"
#include "lpmlab/estimator.hpp"
#include "lpmlab/experiments.hpp"
#include "lpmlab/graph.hpp"

namespace lpmlab {

using Json = nlohmann::json;

/// Throws when the document's schema_version is missing or has a different
/// major version than this build writes.
void check_schema_version(const Json& doc);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// Graph document: schema/version envelope, meta (model, link, n, seed,
/// optional conditioning time), latent arrays, and a sorted i < j edge list.
Json graph_to_json(const GraphSample& g);
GraphSample graph_from_json(const Json& doc);

Json fit_config_to_json(const FitConfig& cfg);
FitConfig fit_config_from_json(const Json& j);

Json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const Json& doc);

/// CSV with a leading "# schema_version=..." comment line; cells containing
/// commas or quotes are quoted.
std::string table_to_csv(const RawTable& table);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
Json load_json_file(const std::string& path);

/// Writes <prefix>_raw.csv, <prefix>_plot.csv and <prefix>_summary.json,
/// creating parent directories as needed.
void write_report_files(const ExperimentReport& report, const std::string& prefix);

/// "i j" per line over the sorted upper triangle, 0-based.
std::string edge_list_text(const GraphSample& g);

}  // namespace lpmlab
