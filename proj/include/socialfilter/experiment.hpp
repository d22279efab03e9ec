#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "socialfilter/simulation.hpp"

namespace socialfilter {

/// JSON (de)serialization of SimConfig; unknown keys are rejected by name.
SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json sim_config_to_json(const SimConfig& cfg);

/// An experiment: a base configuration, an optional parameter sweep
/// (cartesian across entries), and the seed list.
struct ExperimentSpec {
  nlohmann::json base;  // SimConfig fields, seed ignored in favor of `seeds`
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> sweep;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "out";

  static ExperimentSpec from_json(const nlohmann::json& j);
  static ExperimentSpec load_file(const std::string& path);
  nlohmann::json to_json() const;
};

/// Applies one "dotted.path=value" override to a spec document. Values parse
/// as JSON when possible, else as strings. Unknown paths surface later, by
/// name, when the config is parsed.
void apply_override(nlohmann::json& spec_json, const std::string& assignment);

struct RunRecord {
  std::string file;  // CSV path relative to the output directory
  std::uint32_t point_index = 0;
  std::uint64_t seed = 0;
  nlohmann::json params;  // the sweep-point overrides
};

/// Runs every (sweep point x seed) combination, writing one CSV per run plus
/// manifest.json with the resolved configs and tool version. Runs execute on
/// `jobs` threads; output bytes are independent of scheduling.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                                      unsigned jobs);

struct SummaryRow {
  std::uint32_t point_index = 0;
  std::string params;
  std::string engine;
  std::uint32_t num_seeds = 0;
  double blocked_spam_pct_mean = 0.0;
  double blocked_spam_pct_min = 0.0;
  double blocked_spam_pct_max = 0.0;
  double blocked_legit_pct_mean = 0.0;
  double blocked_legit_pct_min = 0.0;
  double blocked_legit_pct_max = 0.0;
};

/// Seed-averaged end-of-run metrics per sweep point, from a directory
/// produced by run_experiment. Also writes summary.csv there.
std::vector<SummaryRow> summarize(const std::string& dir);

}  // namespace socialfilter
