#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relspec/harness.hpp"

namespace relspec {

const char* to_string(Dependence d);
const char* to_string(BreakKind b);
const char* to_string(TestMode m);

nlohmann::json to_json(const ExperimentConfig& config);

/// Parses an experiment config. Unknown keys and invalid values raise
/// ErrorCode::kConfig naming the offending field.
ExperimentConfig experiment_from_json(const nlohmann::json& doc);

/// A `simulate` job: the experiment plus pivot settings and an optional
/// epsilon sweep.
struct SimulationJob {
  ExperimentConfig experiment;
  std::vector<double> epsilons;  // empty: a single run at experiment.epsilon
  int histogram_bins = 20;
  std::int64_t pivot_replicates = 500000;
  std::uint64_t pivot_seed = 20190815;
};

SimulationJob simulation_job_from_json(const nlohmann::json& doc);
SimulationJob load_simulation_job(const std::filesystem::path& path);

}  // namespace relspec
