#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace curvelab {

// Named experiment plus free-form parameter overrides. Every experiment
// supplies defaults; params only needs the keys being changed.
struct ExperimentConfig {
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 1;
  std::string out_dir;

  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentReport {
  // schema_version, experiment, config echo, results, flags, timings_ms.
  nlohmann::json summary;
  std::string text;  // one-page human-readable summary
  std::vector<std::pair<std::string, std::string>> artifacts;  // name, content

  bool all_pass() const;
};

std::vector<std::string> experiment_names();
std::vector<std::string> preset_names();

// Dispatches on config.experiment; throws std::invalid_argument listing
// the valid names when unknown. Deterministic for a fixed config + seed.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Writes summary.json, summary.txt, and all artifacts into dir.
void write_report(const ExperimentReport& report, const std::string& dir);

}  // namespace curvelab
