#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dacq/baselines.hpp"
#include "dacq/dataset.hpp"
#include "dacq/ea.hpp"
#include "dacq/learner.hpp"
#include "dacq/sps.hpp"
#include "dacq/synth.hpp"

namespace dacq {

struct DatasetSpec {
  std::string path;                // CSV path, or
  std::optional<SynthSpec> synth;  // generated in-process
  std::uint64_t synth_seed = 0;
};

struct PredicateSpec {
  // Classification: nullopt = all schema labels, otherwise the given subset.
  std::optional<std::vector<int>> labels;
  // Regression: sub-ranges per dimension.
  std::size_t grid_n = 4;
};

struct StrategySpec {
  std::string name;  // "ea" | "sps" | "acs-uniform" | "acs-ai" | "acs-rd"
  std::variant<EAConfig, SPSConfig, BaselineConfig> config;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  PredicateSpec predicates;
  double test_fraction = 0.2;
  double init_fraction = 0.2;
  StrategySpec strategy;
  std::vector<long long> budgets;
  int repetitions = 10;
  std::uint64_t seed = 0;
  LearnerConfig learner;
  int jobs = 1;
};

struct RepetitionResult {
  long long budget = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  double metric_before = 0.0;
  double metric_after = 0.0;
  double improvement = 0.0;
  long long charged = 0;
  double seconds = 0.0;  // wall time of the acquisition run
  AcquisitionLog log;
};

struct BudgetAggregate {
  long long budget = 0;
  double mean_improvement = 0.0;
  double std_improvement = 0.0;  // sample standard deviation
};

struct ExperimentResult {
  std::vector<RepetitionResult> rows;        // (budget, repetition) order
  std::vector<BudgetAggregate> aggregates;
};

Dataset resolve_dataset(const DatasetSpec& spec);
std::vector<Predicate> build_predicates(const Schema& schema,
                                        const PredicateSpec& spec);

// Runs every (budget, repetition) pair: split, train, acquire, retrain on
// everything the consumer holds, score. Repetition seeds derive only from
// (base seed, repetition, budget index), so `jobs` worker threads produce
// results identical to a serial run. The test split is never visible to the
// strategy.
ExperimentResult run_experiment(const Dataset& data,
                                const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace dacq
