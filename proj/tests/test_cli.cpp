#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dacq/cli.hpp"

using namespace dacq;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal_config() {
  return json::parse(R"({
    "dataset": {"synth": {"task": "clf", "classes": 3, "size": 900, "sep": 2.5}, "seed": 3},
    "split": {"test_fraction": 0.2, "init_fraction": 0.05},
    "strategy": {"name": "sps", "batch": 10},
    "budgets": [60],
    "repetitions": 2,
    "seed": 5
  })");
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("dacq_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("parse_config materializes defaults") {
  auto config = parse_config(minimal_config());
  CHECK(config.repetitions == 2);
  CHECK(config.seed == 5);
  CHECK(config.test_fraction == 0.2);
  CHECK(config.learner.kind == LearnerKind::KnnClassifier);
  CHECK(config.learner.k == 5);
  const auto& sps = std::get<SPSConfig>(config.strategy.config);
  CHECK(sps.batch == 10);
  CHECK(sps.tau.has_value());
  CHECK(*sps.tau == 1);
  CHECK(sps.clf.kind == ClfKind::Knn);
  CHECK(sps.clf.k == 1);

  auto echoed = materialize_config(config);
  CHECK(echoed.at("predicates").at("labels") == "all");
  CHECK(echoed.at("clf").at("k") == 1);
  CHECK(echoed.at("strategy").at("tau") == 1);
  // The echo parses back to the same config.
  auto reparsed = parse_config(echoed);
  CHECK(materialize_config(reparsed) == echoed);
}

TEST_CASE("parse_config names the offending key") {
  auto bad_strategy = minimal_config();
  bad_strategy["strategy"]["name"] = "greedy";
  CHECK_THROWS_WITH_AS(parse_config(bad_strategy), doctest::Contains("strategy.name"),
                       std::invalid_argument);

  auto unknown_key = minimal_config();
  unknown_key["strategy"]["lr"] = 0.1;
  CHECK_THROWS_WITH_AS(parse_config(unknown_key), doctest::Contains("strategy.lr"),
                       std::invalid_argument);

  auto missing = minimal_config();
  missing.erase("budgets");
  CHECK_THROWS_WITH_AS(parse_config(missing), doctest::Contains("budgets"),
                       std::invalid_argument);

  auto conflict = minimal_config();
  conflict["dataset"]["path"] = "x.csv";
  CHECK_THROWS_AS(parse_config(conflict), std::invalid_argument);

  auto bad_type = minimal_config();
  bad_type["repetitions"] = "ten";
  CHECK_THROWS_WITH_AS(parse_config(bad_type), doctest::Contains("repetitions"),
                       std::invalid_argument);
}

TEST_CASE("ACQ_SEED overrides the configured seed") {
  ::setenv("ACQ_SEED", "982451653", 1);
  auto config = parse_config(minimal_config());
  ::unsetenv("ACQ_SEED");
  CHECK(config.seed == 982451653ULL);
}

TEST_CASE("tau zero means an unbounded window") {
  auto j = minimal_config();
  j["strategy"]["tau"] = 0;
  auto config = parse_config(j);
  CHECK(!std::get<SPSConfig>(config.strategy.config).tau.has_value());
}

TEST_CASE("cmd_synth writes deterministic CSV") {
  TempDir dir;
  SynthOptions options;
  options.spec.task = Task::Classification;
  options.spec.classes = 4;
  options.spec.size = 200;
  options.seed = 11;
  options.out = (dir.path / "pool.csv").string();
  REQUIRE(cmd_synth(options) == 0);

  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto first = read(options.out);
  CHECK(first.substr(0, 12) == "f0,f1,label\n");
  REQUIRE(cmd_synth(options) == 0);
  CHECK(read(options.out) == first);

  SynthOptions missing_out;
  CHECK(cmd_synth(missing_out) != 0);
}

TEST_CASE("cmd_run produces the three artifact kinds") {
  TempDir dir;
  auto config_path = dir.path / "config.json";
  {
    std::ofstream out(config_path);
    out << minimal_config().dump(2);
  }
  RunOptions options;
  options.config_path = config_path.string();
  options.out_dir = (dir.path / "out").string();
  REQUIRE(cmd_run(options) == 0);
  CHECK(fs::exists(dir.path / "out" / "results.csv"));
  CHECK(fs::exists(dir.path / "out" / "manifest.json"));
  CHECK(fs::exists(dir.path / "out" / "log_60_0.csv"));
  CHECK(fs::exists(dir.path / "out" / "log_60_1.csv"));

  // results.csv carries one row per repetition plus a header.
  std::ifstream in(dir.path / "out" / "results.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 3);
}

TEST_CASE("cmd_run cleans up after a failing config") {
  TempDir dir;
  auto config_path = dir.path / "config.json";
  {
    std::ofstream out(config_path);
    auto j = minimal_config();
    j["strategy"]["name"] = "bogus";
    out << j.dump(2);
  }
  RunOptions options;
  options.config_path = config_path.string();
  options.out_dir = (dir.path / "out").string();
  CHECK(cmd_run(options) != 0);
  CHECK(!fs::exists(dir.path / "out"));
}

TEST_CASE("cmd_compare on identical inputs gives p = 0.5") {
  TempDir dir;
  auto results = dir.path / "results.csv";
  {
    std::ofstream out(results);
    out << "strategy,budget,repetition,seed,metric_before,metric_after,improvement,"
           "charged,seconds\n";
    out << "sps,100,0,1,0.5,0.6,0.1,100,0.1\n";
    out << "sps,100,1,2,0.5,0.62,0.12,100,0.1\n";
    out << "sps,100,2,3,0.5,0.58,0.08,100,0.1\n";
  }
  CompareOptions options{results.string(), results.string()};
  std::ostringstream out;
  REQUIRE(cmd_compare(options, out) == 0);
  auto text = out.str();
  CHECK(text.find("100,0.1,0.1,0.5,0.5") != std::string::npos);
}

TEST_CASE("cmd_compare rejects disjoint budgets") {
  TempDir dir;
  auto a = dir.path / "a.csv";
  auto b = dir.path / "b.csv";
  {
    std::ofstream out(a);
    out << "strategy,budget,repetition,seed,metric_before,metric_after,improvement,"
           "charged,seconds\n";
    out << "ea,100,0,1,0.5,0.6,0.1,100,0.1\n";
  }
  {
    std::ofstream out(b);
    out << "strategy,budget,repetition,seed,metric_before,metric_after,improvement,"
           "charged,seconds\n";
    out << "ea,200,0,1,0.5,0.6,0.1,200,0.1\n";
  }
  CompareOptions options{a.string(), b.string()};
  std::ostringstream out;
  CHECK(cmd_compare(options, out) != 0);
}

TEST_CASE("dominant strategy comes out significant") {
  TempDir dir;
  auto a = dir.path / "a.csv";
  auto b = dir.path / "b.csv";
  auto write = [](const fs::path& p, std::initializer_list<double> improvements) {
    std::ofstream out(p);
    out << "strategy,budget,repetition,seed,metric_before,metric_after,improvement,"
           "charged,seconds\n";
    int rep = 0;
    for (double v : improvements) {
      out << "x,100," << rep++ << ",1,0.5,0.6," << v << ",100,0.1\n";
    }
  };
  write(a, {0.30, 0.31, 0.29, 0.30, 0.32});
  write(b, {0.10, 0.11, 0.09, 0.12, 0.10});
  CompareOptions options{a.string(), b.string()};
  std::ostringstream out;
  REQUIRE(cmd_compare(options, out) == 0);
  // p(a>b) < 0.05 in the second-to-last column.
  auto text = out.str();
  auto line = text.substr(text.find("\n100,") + 1);
  std::stringstream row(line);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(row, cell, ',')) cells.push_back(cell);
  CHECK(std::stod(cells[3]) < 0.05);
  CHECK(std::stod(cells[4]) > 0.95);
}
