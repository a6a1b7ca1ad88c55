#pragma once

#include <string>

#include "dacq/experiment.hpp"

#include "json.hpp"

namespace dacq {

extern const char* kToolVersion;

// Parses the run config, throwing std::invalid_argument naming the offending
// key on any problem (unknown keys included). ACQ_SEED in the environment
// overrides the configured base seed.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_file(const std::string& path);

// Echo of the resolved config with every default materialized.
nlohmann::json materialize_config(const ExperimentConfig& config);

struct SynthOptions {
  SynthSpec spec;
  std::uint64_t seed = 0;
  std::string out;
};

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  int jobs = 1;
};

struct CompareOptions {
  std::string results_a;
  std::string results_b;
};

// Subcommand bodies; return a process exit status. cmd_run writes
// results.csv, one log_<budget>_<rep>.csv per repetition, and manifest.json
// into out_dir, removing whatever it created if anything fails.
int cmd_synth(const SynthOptions& options);
int cmd_run(const RunOptions& options);
int cmd_compare(const CompareOptions& options, std::ostream& out);

}  // namespace dacq
