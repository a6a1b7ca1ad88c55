#include "dacq/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "dacq/split.hpp"

namespace dacq {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Init: return "init";
    case Phase::Estimation: return "estimation";
    case Phase::Allocation: return "allocation";
    case Phase::Round: return "round";
  }
  return "?";
}

Dataset resolve_dataset(const DatasetSpec& spec) {
  if (spec.synth) {
    Rng rng(mix64(spec.synth_seed));
    return gen_synth(*spec.synth, rng);
  }
  if (spec.path.empty())
    throw std::invalid_argument("dataset: either a path or a synth spec is required");
  return load_dataset_file(spec.path);
}

std::vector<Predicate> build_predicates(const Schema& schema, const PredicateSpec& spec) {
  if (schema.task == Task::Classification)
    return build_label_predicates(schema, spec.labels ? *spec.labels : schema.labels);
  return build_grid_predicates(schema, spec.grid_n);
}

namespace {

AcquisitionLog dispatch_strategy(const StrategySpec& strategy, Provider& provider,
                                 ConsumerHoldings& holdings, long long budget, Rng& rng) {
  if (const auto* ea = std::get_if<EAConfig>(&strategy.config))
    return run_ea(provider, holdings, *ea, budget, rng);
  if (const auto* sps = std::get_if<SPSConfig>(&strategy.config))
    return run_sps(provider, holdings, *sps, budget, rng);
  const auto& baseline = std::get<BaselineConfig>(strategy.config);
  switch (baseline.kind) {
    case BaselineKind::Uniform:
      return run_acs_uniform(provider, holdings, baseline, budget, rng);
    case BaselineKind::AccuracyImprovement:
      return run_acs_ai(provider, holdings, baseline, budget, rng);
    case BaselineKind::RedistributedLabels:
      return run_acs_rd(provider, holdings, baseline, budget, rng);
  }
  throw std::invalid_argument("unknown baseline kind");
}

void validate(const Dataset& data, const ExperimentConfig& config) {
  if (config.repetitions < 1)
    throw std::invalid_argument("experiment: repetitions must be >= 1");
  if (config.budgets.empty()) throw std::invalid_argument("experiment: no budgets");
  for (long long b : config.budgets)
    if (b < 0) throw std::invalid_argument("experiment: negative budget");
  if (config.jobs < 1) throw std::invalid_argument("experiment: jobs must be >= 1");
  bool classification = data.schema.task == Task::Classification;
  if (classification != (config.learner.kind == LearnerKind::KnnClassifier))
    throw std::invalid_argument("experiment: learner kind does not match the task");
  if (const auto* baseline = std::get_if<BaselineConfig>(&config.strategy.config)) {
    if (baseline->kind != BaselineKind::Uniform && !classification)
      throw std::invalid_argument(
          "experiment: retraining baselines need a classification task");
  }
}

double evaluate(const Learner& model, const Dataset& test) {
  return model.config().kind == LearnerKind::KnnClassifier ? accuracy(model, test)
                                                           : r2(model, test);
}

}  // namespace

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config) {
  validate(data, config);
  auto predicates = build_predicates(data.schema, config.predicates);

  struct Job {
    long long budget;
    int repetition;
    std::size_t budget_index;
  };
  std::vector<Job> jobs;
  for (std::size_t bi = 0; bi < config.budgets.size(); ++bi)
    for (int rep = 0; rep < config.repetitions; ++rep)
      jobs.push_back({config.budgets[bi], rep, bi});

  std::vector<RepetitionResult> rows(jobs.size());

  auto run_one = [&](const Job& job, RepetitionResult& row) {
    const auto seed = derive_seed(config.seed, static_cast<std::uint64_t>(job.repetition),
                                  job.budget_index);
    Rng rng(seed);
    auto split = split_init_pool_test(data, config.test_fraction, config.init_fraction,
                                      predicates, rng);

    auto before_model = Learner::train(config.learner, data.schema, split.init.records);
    row.metric_before = evaluate(before_model, split.test);

    Provider provider(split.pool, predicates, mix64(seed ^ 0x70726f76ULL));
    ConsumerHoldings holdings(data.schema, predicates);
    holdings.add_all(split.init.records);

    std::unordered_map<std::uint64_t, const Record*> by_id;
    for (const auto& r : split.pool.records) by_id.emplace(r.id, &r);

    Rng strategy_rng(mix64(seed ^ 0x73747261ULL));
    auto t0 = std::chrono::steady_clock::now();
    row.log = dispatch_strategy(config.strategy, provider, holdings, job.budget,
                                strategy_rng);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto training = split.init.records;
    for (const auto& inter : row.log.interactions)
      for (std::uint64_t id : inter.ids) training.push_back(*by_id.at(id));
    auto after_model = Learner::train(config.learner, data.schema, std::move(training));
    row.metric_after = evaluate(after_model, split.test);

    row.budget = job.budget;
    row.repetition = job.repetition;
    row.seed = seed;
    row.improvement = row.metric_after - row.metric_before;
    row.charged = row.log.total_charged;
  };

  const auto workers = static_cast<std::size_t>(
      std::min<long long>(config.jobs, static_cast<long long>(jobs.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_one(jobs[i], rows[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= jobs.size()) return;
          run_one(jobs[i], rows[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  ExperimentResult result;
  result.rows = std::move(rows);
  for (std::size_t bi = 0; bi < config.budgets.size(); ++bi) {
    BudgetAggregate agg;
    agg.budget = config.budgets[bi];
    double mean = 0.0;
    int n = config.repetitions;
    for (int rep = 0; rep < n; ++rep)
      mean += result.rows[bi * static_cast<std::size_t>(n) + static_cast<std::size_t>(rep)]
                  .improvement;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (int rep = 0; rep < n; ++rep) {
      double d = result.rows[bi * static_cast<std::size_t>(n) + static_cast<std::size_t>(rep)]
                     .improvement -
                 mean;
      var += d * d;
    }
    agg.mean_improvement = mean;
    agg.std_improvement = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    result.aggregates.push_back(agg);
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment(resolve_dataset(config.dataset), config);
}

}  // namespace dacq
