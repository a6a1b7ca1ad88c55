#include "dacq/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "dacq/stats.hpp"

namespace fs = std::filesystem;

namespace dacq {

const char* kToolVersion = "dacq/0.1.0";

namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) bad_key(path, "expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) bad_key(path + "." + item.key(), "unknown key");
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) bad_key(path + "." + key, "missing");
  return j.at(key);
}

double get_num(const json& j, const std::string& key, double def, const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) bad_key(path + "." + key, "expected a number");
  return j.at(key).get<double>();
}

long long get_int(const json& j, const std::string& key, long long def, const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer()) bad_key(path + "." + key, "expected an integer");
  return j.at(key).get<long long>();
}

std::string get_str(const json& j, const std::string& key, const std::string& def,
                    const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_string()) bad_key(path + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

SynthSpec parse_synth(const json& j, const std::string& path) {
  check_keys(j, {"task", "classes", "cells", "size", "sep", "noise", "skew", "seed"}, path);
  SynthSpec spec;
  auto task = get_str(j, "task", "clf", path);
  if (task == "clf") {
    spec.task = Task::Classification;
  } else if (task == "reg") {
    spec.task = Task::Regression;
  } else {
    bad_key(path + ".task", "expected 'clf' or 'reg'");
  }
  spec.classes = static_cast<int>(get_int(j, "classes", 5, path));
  spec.cells_per_dim = static_cast<int>(get_int(j, "cells", 4, path));
  spec.size = get_int(j, "size", 10000, path);
  spec.separation = get_num(j, "sep", 3.0, path);
  spec.noise = get_num(j, "noise", 0.0, path);
  spec.skew = get_num(j, "skew", 0.0, path);
  return spec;
}

ClfConfig parse_clf(const json& j, const std::string& path) {
  check_keys(j, {"kind", "k", "epochs", "learning_rate"}, path);
  ClfConfig clf;
  auto kind = get_str(j, "kind", "knn", path);
  if (kind == "knn") {
    clf.kind = ClfKind::Knn;
  } else if (kind == "perceptron") {
    clf.kind = ClfKind::Perceptron;
  } else {
    bad_key(path + ".kind", "expected 'knn' or 'perceptron'");
  }
  clf.k = static_cast<int>(get_int(j, "k", 1, path));
  clf.epochs = static_cast<int>(get_int(j, "epochs", 20, path));
  clf.learning_rate = get_num(j, "learning_rate", 0.1, path);
  return clf;
}

StrategySpec parse_strategy(const json& j, const ClfConfig& clf, const LearnerConfig& learner) {
  const std::string path = "strategy";
  auto name = require(j, "name", path).get<std::string>();
  StrategySpec spec;
  spec.name = name;
  if (name == "ea") {
    check_keys(j, {"name", "l", "delta", "allocation", "grid_size"}, path);
    EAConfig ea;
    ea.l_percent = get_num(j, "l", 5.0, path);
    ea.delta = get_num(j, "delta", 0.01, path);
    ea.grid_size = static_cast<int>(get_int(j, "grid_size", 200, path));
    auto alloc = get_str(j, "allocation", "linear", path);
    if (alloc == "linear") {
      ea.allocation = Allocation::Linear;
    } else if (alloc == "sqrt") {
      ea.allocation = Allocation::SquareRoot;
    } else {
      bad_key(path + ".allocation", "expected 'linear' or 'sqrt'");
    }
    ea.clf = clf;
    spec.config = ea;
  } else if (name == "sps") {
    check_keys(j, {"name", "batch", "tau", "measure"}, path);
    SPSConfig sps;
    sps.batch = get_int(j, "batch", 0, path);
    auto tau = get_int(j, "tau", 1, path);
    if (tau < 0) bad_key(path + ".tau", "expected >= 0 (0 = unbounded)");
    sps.tau = tau == 0 ? std::optional<std::size_t>{}
                       : std::optional<std::size_t>{static_cast<std::size_t>(tau)};
    auto measure = get_str(j, "measure", "novelty", path);
    if (measure == "novelty") {
      sps.measure = SpsMeasure::Novelty;
    } else if (measure == "retrain") {
      sps.measure = SpsMeasure::Retrain;
    } else {
      bad_key(path + ".measure", "expected 'novelty' or 'retrain'");
    }
    sps.clf = clf;
    sps.retrain_learner = learner;
    spec.config = sps;
  } else if (name == "acs-uniform" || name == "acs-ai" || name == "acs-rd") {
    check_keys(j, {"name", "batch"}, path);
    BaselineConfig baseline;
    baseline.batch = get_int(j, "batch", 0, path);
    baseline.kind = name == "acs-uniform" ? BaselineKind::Uniform
                    : name == "acs-ai"    ? BaselineKind::AccuracyImprovement
                                          : BaselineKind::RedistributedLabels;
    baseline.learner = learner;
    spec.config = baseline;
  } else {
    bad_key(path + ".name", "unknown strategy '" + name + "'");
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j, {"dataset", "predicates", "split", "strategy", "budgets", "repetitions",
                 "seed", "learner", "clf"},
             "config");
  ExperimentConfig config;

  const auto& dataset = require(j, "dataset", "config");
  check_keys(dataset, {"path", "synth", "seed"}, "dataset");
  if (dataset.contains("path") == dataset.contains("synth"))
    bad_key("dataset", "exactly one of 'path' or 'synth' is required");
  if (dataset.contains("path")) {
    config.dataset.path = get_str(dataset, "path", "", "dataset");
  } else {
    config.dataset.synth = parse_synth(dataset.at("synth"), "dataset.synth");
  }
  config.dataset.synth_seed = static_cast<std::uint64_t>(get_int(dataset, "seed", 0, "dataset"));

  if (j.contains("predicates")) {
    const auto& preds = j.at("predicates");
    check_keys(preds, {"labels", "grid_n"}, "predicates");
    if (preds.contains("labels")) {
      const auto& labels = preds.at("labels");
      if (labels.is_string()) {
        if (labels.get<std::string>() != "all")
          bad_key("predicates.labels", "expected 'all' or an array of class ids");
      } else if (labels.is_array()) {
        config.predicates.labels = labels.get<std::vector<int>>();
      } else {
        bad_key("predicates.labels", "expected 'all' or an array of class ids");
      }
    }
    config.predicates.grid_n =
        static_cast<std::size_t>(get_int(preds, "grid_n", 4, "predicates"));
  }

  if (j.contains("split")) {
    const auto& split = j.at("split");
    check_keys(split, {"test_fraction", "init_fraction"}, "split");
    config.test_fraction = get_num(split, "test_fraction", 0.2, "split");
    config.init_fraction = get_num(split, "init_fraction", 0.2, "split");
  }

  ClfConfig clf;
  if (j.contains("clf")) clf = parse_clf(j.at("clf"), "clf");

  if (j.contains("learner")) {
    const auto& learner = j.at("learner");
    check_keys(learner, {"kind", "k"}, "learner");
    auto kind = get_str(learner, "kind", "knn-classifier", "learner");
    if (kind == "knn-classifier") {
      config.learner.kind = LearnerKind::KnnClassifier;
    } else if (kind == "knn-regressor") {
      config.learner.kind = LearnerKind::KnnRegressor;
    } else {
      bad_key("learner.kind", "expected 'knn-classifier' or 'knn-regressor'");
    }
    config.learner.k = static_cast<int>(get_int(learner, "k", 5, "learner"));
  }

  config.strategy = parse_strategy(require(j, "strategy", "config"), clf, config.learner);

  const auto& budgets = require(j, "budgets", "config");
  if (!budgets.is_array() || budgets.empty()) bad_key("budgets", "expected a non-empty array");
  for (const auto& b : budgets) {
    if (!b.is_number_integer() || b.get<long long>() < 0)
      bad_key("budgets", "expected non-negative integers");
    config.budgets.push_back(b.get<long long>());
  }

  auto reps = get_int(j, "repetitions", 10, "config");
  if (reps < 1) bad_key("repetitions", "expected >= 1");
  config.repetitions = static_cast<int>(reps);
  config.seed = static_cast<std::uint64_t>(get_int(j, "seed", 0, "config"));

  if (const char* env_seed = std::getenv("ACQ_SEED")) {
    config.seed = std::strtoull(env_seed, nullptr, 10);
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: invalid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

json materialize_config(const ExperimentConfig& config) {
  json j;
  if (config.dataset.synth) {
    const auto& s = *config.dataset.synth;
    j["dataset"] = {{"synth",
                     {{"task", s.task == Task::Classification ? "clf" : "reg"},
                      {"classes", s.classes},
                      {"cells", s.cells_per_dim},
                      {"size", s.size},
                      {"sep", s.separation},
                      {"noise", s.noise},
                      {"skew", s.skew}}},
                    {"seed", config.dataset.synth_seed}};
  } else {
    j["dataset"] = {{"path", config.dataset.path}, {"seed", config.dataset.synth_seed}};
  }
  if (config.predicates.labels) {
    j["predicates"] = {{"labels", *config.predicates.labels},
                       {"grid_n", config.predicates.grid_n}};
  } else {
    j["predicates"] = {{"labels", "all"}, {"grid_n", config.predicates.grid_n}};
  }
  j["split"] = {{"test_fraction", config.test_fraction},
                {"init_fraction", config.init_fraction}};

  json strategy;
  strategy["name"] = config.strategy.name;
  ClfConfig clf;
  if (const auto* ea = std::get_if<EAConfig>(&config.strategy.config)) {
    strategy["l"] = ea->l_percent;
    strategy["delta"] = ea->delta;
    strategy["allocation"] = ea->allocation == Allocation::Linear ? "linear" : "sqrt";
    strategy["grid_size"] = ea->grid_size;
    clf = ea->clf;
  } else if (const auto* sps = std::get_if<SPSConfig>(&config.strategy.config)) {
    strategy["batch"] = sps->batch;  // 0 = auto (1% of budget, clamped to [10,500])
    strategy["tau"] = sps->tau ? static_cast<long long>(*sps->tau) : 0;
    strategy["measure"] = sps->measure == SpsMeasure::Novelty ? "novelty" : "retrain";
    clf = sps->clf;
  } else {
    const auto& baseline = std::get<BaselineConfig>(config.strategy.config);
    strategy["batch"] = baseline.batch;
  }
  j["strategy"] = strategy;
  j["budgets"] = config.budgets;
  j["repetitions"] = config.repetitions;
  j["seed"] = config.seed;
  j["learner"] = {{"kind", config.learner.kind == LearnerKind::KnnClassifier
                               ? "knn-classifier"
                               : "knn-regressor"},
                  {"k", config.learner.k}};
  j["clf"] = {{"kind", clf.kind == ClfKind::Knn ? "knn" : "perceptron"},
              {"k", clf.k},
              {"epochs", clf.epochs},
              {"learning_rate", clf.learning_rate}};
  return j;
}

int cmd_synth(const SynthOptions& options) {
  try {
    if (options.out.empty()) throw std::invalid_argument("synth: --out is required");
    Rng rng(mix64(options.seed));
    auto data = gen_synth(options.spec, rng);
    save_dataset_file(data, options.out);
    std::fprintf(stderr, "wrote %zu records to %s\n", data.records.size(),
                 options.out.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_results_csv(const std::string& path, const std::string& strategy,
                       const ExperimentResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "strategy,budget,repetition,seed,metric_before,metric_after,improvement,"
         "charged,seconds\n";
  char seconds[32];
  for (const auto& row : result.rows) {
    std::snprintf(seconds, sizeof(seconds), "%.3f", row.seconds);
    out << strategy << "," << row.budget << "," << row.repetition << "," << row.seed << ","
        << fmt_double(row.metric_before) << "," << fmt_double(row.metric_after) << ","
        << fmt_double(row.improvement) << "," << row.charged << "," << seconds << "\n";
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

void write_log_csv(const std::string& path, const AcquisitionLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "step,phase,predicate,requested,received\n";
  for (std::size_t i = 0; i < log.interactions.size(); ++i) {
    const auto& inter = log.interactions[i];
    out << i << "," << phase_name(inter.phase) << "," << inter.predicate << ","
        << inter.requested << "," << inter.received << "\n";
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int cmd_run(const RunOptions& options) {
  std::vector<fs::path> written;
  bool created_dir = false;
  fs::path out_dir(options.out_dir);
  try {
    if (options.out_dir.empty()) throw std::invalid_argument("run: --out-dir is required");
    auto config = parse_config_file(options.config_path);
    config.jobs = options.jobs;

    created_dir = fs::create_directories(out_dir);

    json manifest;
    manifest["version"] = kToolVersion;
    manifest["config_path"] = options.config_path;
    manifest["out_dir"] = options.out_dir;
    manifest["jobs"] = options.jobs;
    manifest["config"] = materialize_config(config);
    {
      auto path = out_dir / "manifest.json";
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot open " + path.string());
      out << manifest.dump(2) << "\n";
      written.push_back(path);
    }

    auto data = resolve_dataset(config.dataset);
    auto result = run_experiment(data, config);

    auto results_path = out_dir / "results.csv";
    write_results_csv(results_path.string(), config.strategy.name, result);
    written.push_back(results_path);

    for (const auto& row : result.rows) {
      auto path = out_dir / ("log_" + std::to_string(row.budget) + "_" +
                             std::to_string(row.repetition) + ".csv");
      write_log_csv(path.string(), row.log);
      written.push_back(path);
    }
    std::fprintf(stderr, "wrote %zu files to %s\n", written.size(), options.out_dir.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    std::error_code ec;
    if (created_dir) {
      fs::remove_all(out_dir, ec);
    } else {
      for (const auto& path : written) fs::remove(path, ec);
    }
    return 1;
  }
}

namespace {

// budget -> improvements, in row order.
std::map<long long, std::vector<double>> read_improvements(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::stringstream header(line);
  std::string col;
  int budget_col = -1, improvement_col = -1, i = 0;
  while (std::getline(header, col, ',')) {
    if (col == "budget") budget_col = i;
    if (col == "improvement") improvement_col = i;
    ++i;
  }
  if (budget_col < 0 || improvement_col < 0)
    throw std::runtime_error(path + ": needs 'budget' and 'improvement' columns");

  std::map<long long, std::vector<double>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::vector<std::string> cells;
    while (std::getline(row, col, ',')) cells.push_back(col);
    out[std::stoll(cells.at(budget_col))].push_back(std::stod(cells.at(improvement_col)));
  }
  return out;
}

}  // namespace

int cmd_compare(const CompareOptions& options, std::ostream& out) {
  try {
    auto a = read_improvements(options.results_a);
    auto b = read_improvements(options.results_b);
    std::vector<long long> budgets;
    for (const auto& [budget, _] : a)
      if (b.count(budget)) budgets.push_back(budget);
    if (budgets.empty()) throw std::runtime_error("compare: no overlapping budgets");

    out << "budget,mean_improvement_a,mean_improvement_b,p_a_gt_b,p_b_gt_a\n";
    for (long long budget : budgets) {
      const auto& xa = a.at(budget);
      const auto& xb = b.at(budget);
      double ma = 0.0, mb = 0.0;
      for (double x : xa) ma += x;
      for (double x : xb) mb += x;
      ma /= static_cast<double>(xa.size());
      mb /= static_cast<double>(xb.size());
      out << budget << "," << fmt_double(ma) << "," << fmt_double(mb) << ","
          << fmt_double(one_sided_t_test(xa, xb)) << ","
          << fmt_double(one_sided_t_test(xb, xa)) << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace dacq
