#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dacq/baselines.hpp"
#include "dacq/cli.hpp"
#include "dacq/ea.hpp"
#include "dacq/experiment.hpp"
#include "dacq/split.hpp"
#include "dacq/sps.hpp"
#include "dacq/stats.hpp"
#include "dacq/synth.hpp"

namespace py = pybind11;
using namespace dacq;

namespace {

// Strategy entry points take a seed here instead of an engine reference.
template <typename Fn>
AcquisitionLog with_rng(Fn&& fn, std::uint64_t seed) {
  Rng rng(mix64(seed));
  return fn(rng);
}

ExperimentResult run_experiment_json(const std::string& config_json) {
  nlohmann::json j = nlohmann::json::parse(config_json);
  return run_experiment(parse_config(j));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Budget-constrained data acquisition strategies (EA, SPS) for ML models";
  m.attr("__version__") = kToolVersion;

  py::enum_<Task>(m, "Task")
      .value("Classification", Task::Classification)
      .value("Regression", Task::Regression);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi);

  py::class_<Record>(m, "Record")
      .def(py::init<>())
      .def_readwrite("id", &Record::id)
      .def_readwrite("features", &Record::features)
      .def_readwrite("label", &Record::label)
      .def_readwrite("target", &Record::target);

  py::class_<Schema>(m, "Schema")
      .def(py::init<>())
      .def_readwrite("dimension", &Schema::dimension)
      .def_readwrite("task", &Schema::task)
      .def_readwrite("labels", &Schema::labels)
      .def_readwrite("feature_ranges", &Schema::feature_ranges)
      .def_readwrite("target_range", &Schema::target_range);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("schema", &Dataset::schema)
      .def_readwrite("records", &Dataset::records)
      .def("__len__", [](const Dataset& d) { return d.records.size(); });

  m.def("load_dataset", &load_dataset_file, py::arg("path"));
  m.def("save_dataset", &save_dataset_file, py::arg("dataset"), py::arg("path"));

  py::class_<Predicate>(m, "Predicate")
      .def_readonly("index", &Predicate::index)
      .def("__repr__", [](const Predicate& p) {
        std::ostringstream out;
        if (const auto* eq = std::get_if<LabelEquals>(&p.selector)) {
          out << "Predicate(label == " << eq->label << ")";
        } else {
          out << "Predicate(cell " << p.index << ")";
        }
        return out.str();
      });

  m.def("matches", &matches, py::arg("predicate"), py::arg("record"));
  m.def("build_label_predicates", &build_label_predicates, py::arg("schema"),
        py::arg("labels"));
  m.def("build_grid_predicates", &build_grid_predicates, py::arg("schema"),
        py::arg("n_per_dim"));

  m.def(
      "split_init_pool_test",
      [](const Dataset& data, double test_fraction, double init_fraction,
         const std::vector<Predicate>& predicates, std::uint64_t seed) {
        Rng rng(mix64(seed));
        auto split = split_init_pool_test(data, test_fraction, init_fraction, predicates, rng);
        return py::make_tuple(split.init, split.pool, split.test);
      },
      py::arg("dataset"), py::arg("test_fraction"), py::arg("init_fraction"),
      py::arg("predicates"), py::arg("seed"),
      "Returns (init, pool, test) datasets.");

  // provider -----------------------------------------------------------

  py::class_<QueryResult>(m, "QueryResult")
      .def_readonly("records", &QueryResult::records)
      .def_readonly("charged", &QueryResult::charged);

  py::class_<Metadata>(m, "Metadata")
      .def_readonly("schema", &Metadata::schema)
      .def_readonly("predicate_counts", &Metadata::predicate_counts);

  py::class_<Provider>(m, "Provider")
      .def(py::init<Dataset, std::vector<Predicate>, std::uint64_t>(), py::arg("pool"),
           py::arg("predicates"), py::arg("seed"))
      .def_property_readonly("metadata", &Provider::metadata)
      .def(
          "answer",
          [](Provider& p, const Predicate& predicate, long long count) {
            return p.answer(Query{predicate, count});
          },
          py::arg("predicate"), py::arg("count"))
      .def("remaining", &Provider::remaining, py::arg("predicate_index"))
      .def("exhausted", &Provider::exhausted);

  // novelty --------------------------------------------------------------

  py::enum_<ClfKind>(m, "ClfKind")
      .value("Knn", ClfKind::Knn)
      .value("Perceptron", ClfKind::Perceptron);

  py::class_<ClfConfig>(m, "ClfConfig")
      .def(py::init<>())
      .def_readwrite("kind", &ClfConfig::kind)
      .def_readwrite("k", &ClfConfig::k)
      .def_readwrite("epochs", &ClfConfig::epochs)
      .def_readwrite("learning_rate", &ClfConfig::learning_rate);

  py::class_<BinaryClassifier>(m, "BinaryClassifier")
      .def("predict", &BinaryClassifier::predict, py::arg("record"));

  m.def(
      "train_clf",
      [](const ClfConfig& config, const Schema& schema, const std::vector<Record>& owned,
         const std::vector<Record>& fresh) {
        return BinaryClassifier::train(config, schema, owned, fresh);
      },
      py::arg("config"), py::arg("schema"), py::arg("owned"), py::arg("fresh"));
  m.def(
      "novelty",
      [](const BinaryClassifier& clf, const std::vector<Record>& fresh) {
        return novelty(clf, fresh);
      },
      py::arg("clf"), py::arg("fresh"));
  m.def(
      "reward_count",
      [](const BinaryClassifier& clf, const std::vector<Record>& batch) {
        return reward_count(clf, batch);
      },
      py::arg("clf"), py::arg("batch"));

  py::class_<ConsumerHoldings>(m, "ConsumerHoldings")
      .def(py::init<Schema, std::vector<Predicate>>(), py::arg("schema"),
           py::arg("predicates"))
      .def("add", &ConsumerHoldings::add, py::arg("record"))
      .def("add_all",
           [](ConsumerHoldings& h, const std::vector<Record>& records) {
             h.add_all(records);
           })
      .def("for_predicate",
           [](const ConsumerHoldings& h, std::size_t index) {
             auto span = h.for_predicate(index);
             return std::vector<Record>(span.begin(), span.end());
           })
      .def("owns", &ConsumerHoldings::owns, py::arg("id"))
      .def("__len__", &ConsumerHoldings::size);

  // stats ----------------------------------------------------------------

  m.def("t_pdf", &t_pdf, py::arg("x"), py::arg("df"));
  m.def("t_cdf", &t_cdf, py::arg("x"), py::arg("df"));
  m.def("t_ppf", &t_ppf, py::arg("q"), py::arg("df"));
  m.def("z_score", &z_score, py::arg("eps"), py::arg("n"), py::arg("s"));
  m.def("min_epsilon", &min_epsilon, py::arg("n"), py::arg("s"), py::arg("delta"));
  m.def("required_records", &required_records, py::arg("a0"), py::arg("s0"),
        py::arg("eps_b"));

  py::class_<UtilityEstimate>(m, "UtilityEstimate")
      .def(py::init(&make_estimate), py::arg("predicate"), py::arg("u_hat"), py::arg("n"),
           py::arg("a0"), py::arg("s0"))
      .def_readonly("predicate", &UtilityEstimate::predicate)
      .def_readonly("u_hat", &UtilityEstimate::u_hat)
      .def_readonly("n", &UtilityEstimate::n)
      .def_readonly("s", &UtilityEstimate::s)
      .def_readonly("a0", &UtilityEstimate::a0)
      .def_readonly("s0", &UtilityEstimate::s0);

  py::class_<EpsilonDecision>(m, "EpsilonDecision")
      .def_readonly("eps0", &EpsilonDecision::eps0)
      .def_readonly("eps_star", &EpsilonDecision::eps_star)
      .def_readonly("delta_b", &EpsilonDecision::delta_b)
      .def_readonly("reward_now", &EpsilonDecision::reward_now)
      .def_readonly("reward_star", &EpsilonDecision::reward_star);

  m.def(
      "delta_budget",
      [](const std::vector<UtilityEstimate>& estimates, double eps_b) {
        return delta_budget(estimates, eps_b);
      },
      py::arg("estimates"), py::arg("eps_b"));
  m.def(
      "optimize_epsilon",
      [](const std::vector<UtilityEstimate>& estimates, long long remaining_budget,
         double delta, int grid_size) {
        return optimize_epsilon(estimates, remaining_budget, delta, grid_size);
      },
      py::arg("estimates"), py::arg("remaining_budget"), py::arg("delta"),
      py::arg("grid_size") = 200);
  m.def(
      "one_sided_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return one_sided_t_test(a, b);
      },
      py::arg("a"), py::arg("b"));

  // strategies -------------------------------------------------------------

  py::enum_<Phase>(m, "Phase")
      .value("Init", Phase::Init)
      .value("Estimation", Phase::Estimation)
      .value("Allocation", Phase::Allocation)
      .value("Round", Phase::Round);

  py::enum_<RunStatus>(m, "RunStatus")
      .value("Completed", RunStatus::Completed)
      .value("PoolExhausted", RunStatus::PoolExhausted);

  py::class_<Interaction>(m, "Interaction")
      .def_readonly("predicate", &Interaction::predicate)
      .def_readonly("requested", &Interaction::requested)
      .def_readonly("received", &Interaction::received)
      .def_readonly("phase", &Interaction::phase)
      .def_readonly("ids", &Interaction::ids);

  py::class_<AcquisitionLog>(m, "AcquisitionLog")
      .def_readonly("interactions", &AcquisitionLog::interactions)
      .def_readonly("total_charged", &AcquisitionLog::total_charged)
      .def_readonly("status", &AcquisitionLog::status);

  py::enum_<Allocation>(m, "Allocation")
      .value("Linear", Allocation::Linear)
      .value("SquareRoot", Allocation::SquareRoot);

  py::class_<EAConfig>(m, "EAConfig")
      .def(py::init<>())
      .def_readwrite("l_percent", &EAConfig::l_percent)
      .def_readwrite("delta", &EAConfig::delta)
      .def_readwrite("allocation", &EAConfig::allocation)
      .def_readwrite("grid_size", &EAConfig::grid_size)
      .def_readwrite("clf", &EAConfig::clf);

  py::enum_<SpsMeasure>(m, "SpsMeasure")
      .value("Novelty", SpsMeasure::Novelty)
      .value("Retrain", SpsMeasure::Retrain);

  py::class_<SPSConfig>(m, "SPSConfig")
      .def(py::init<>())
      .def_readwrite("batch", &SPSConfig::batch)
      .def_readwrite("tau", &SPSConfig::tau)
      .def_readwrite("clf", &SPSConfig::clf)
      .def_readwrite("measure", &SPSConfig::measure)
      .def_readwrite("retrain_learner", &SPSConfig::retrain_learner);

  py::enum_<BaselineKind>(m, "BaselineKind")
      .value("Uniform", BaselineKind::Uniform)
      .value("AccuracyImprovement", BaselineKind::AccuracyImprovement)
      .value("RedistributedLabels", BaselineKind::RedistributedLabels);

  py::class_<BaselineConfig>(m, "BaselineConfig")
      .def(py::init<>())
      .def_readwrite("kind", &BaselineConfig::kind)
      .def_readwrite("batch", &BaselineConfig::batch)
      .def_readwrite("learner", &BaselineConfig::learner);

  m.def(
      "run_ea",
      [](Provider& provider, ConsumerHoldings& holdings, const EAConfig& config,
         long long budget, std::uint64_t seed) {
        return with_rng(
            [&](Rng& rng) { return run_ea(provider, holdings, config, budget, rng); }, seed);
      },
      py::arg("provider"), py::arg("holdings"), py::arg("config"), py::arg("budget"),
      py::arg("seed"));
  m.def(
      "run_sps",
      [](Provider& provider, ConsumerHoldings& holdings, const SPSConfig& config,
         long long budget, std::uint64_t seed) {
        return with_rng(
            [&](Rng& rng) { return run_sps(provider, holdings, config, budget, rng); }, seed);
      },
      py::arg("provider"), py::arg("holdings"), py::arg("config"), py::arg("budget"),
      py::arg("seed"));
  m.def(
      "run_baseline",
      [](Provider& provider, ConsumerHoldings& holdings, const BaselineConfig& config,
         long long budget, std::uint64_t seed) {
        return with_rng(
            [&](Rng& rng) {
              switch (config.kind) {
                case BaselineKind::Uniform:
                  return run_acs_uniform(provider, holdings, config, budget, rng);
                case BaselineKind::AccuracyImprovement:
                  return run_acs_ai(provider, holdings, config, budget, rng);
                default:
                  return run_acs_rd(provider, holdings, config, budget, rng);
              }
            },
            seed);
      },
      py::arg("provider"), py::arg("holdings"), py::arg("config"), py::arg("budget"),
      py::arg("seed"));

  // learners and the experiment harness ------------------------------------

  py::enum_<LearnerKind>(m, "LearnerKind")
      .value("KnnClassifier", LearnerKind::KnnClassifier)
      .value("KnnRegressor", LearnerKind::KnnRegressor);

  py::class_<LearnerConfig>(m, "LearnerConfig")
      .def(py::init<>())
      .def_readwrite("kind", &LearnerConfig::kind)
      .def_readwrite("k", &LearnerConfig::k);

  py::class_<Learner>(m, "Learner")
      .def_static(
          "train",
          [](const LearnerConfig& config, const Schema& schema, std::vector<Record> data) {
            return Learner::train(config, schema, std::move(data));
          },
          py::arg("config"), py::arg("schema"), py::arg("data"))
      .def("predict_label", &Learner::predict_label, py::arg("record"))
      .def("predict_target", &Learner::predict_target, py::arg("record"));

  m.def("accuracy", &accuracy, py::arg("model"), py::arg("test"));
  m.def("r2", &r2, py::arg("model"), py::arg("test"));

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("task", &SynthSpec::task)
      .def_readwrite("classes", &SynthSpec::classes)
      .def_readwrite("cells_per_dim", &SynthSpec::cells_per_dim)
      .def_readwrite("size", &SynthSpec::size)
      .def_readwrite("separation", &SynthSpec::separation)
      .def_readwrite("noise", &SynthSpec::noise)
      .def_readwrite("skew", &SynthSpec::skew);

  m.def(
      "gen_synth",
      [](const SynthSpec& spec, std::uint64_t seed) {
        Rng rng(mix64(seed));
        return gen_synth(spec, rng);
      },
      py::arg("spec"), py::arg("seed"));

  py::class_<RepetitionResult>(m, "RepetitionResult")
      .def_readonly("budget", &RepetitionResult::budget)
      .def_readonly("repetition", &RepetitionResult::repetition)
      .def_readonly("seed", &RepetitionResult::seed)
      .def_readonly("metric_before", &RepetitionResult::metric_before)
      .def_readonly("metric_after", &RepetitionResult::metric_after)
      .def_readonly("improvement", &RepetitionResult::improvement)
      .def_readonly("charged", &RepetitionResult::charged)
      .def_readonly("seconds", &RepetitionResult::seconds)
      .def_readonly("log", &RepetitionResult::log);

  py::class_<BudgetAggregate>(m, "BudgetAggregate")
      .def_readonly("budget", &BudgetAggregate::budget)
      .def_readonly("mean_improvement", &BudgetAggregate::mean_improvement)
      .def_readonly("std_improvement", &BudgetAggregate::std_improvement);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("rows", &ExperimentResult::rows)
      .def_readonly("aggregates", &ExperimentResult::aggregates);

  m.def("run_experiment", &run_experiment_json, py::arg("config_json"),
        "Runs an experiment from the same JSON config format the CLI accepts.");
}
