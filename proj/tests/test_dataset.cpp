#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dacq/dataset.hpp"
#include "dacq/split.hpp"

using namespace dacq;

TEST_CASE("load_dataset classification") {
  std::istringstream in("f0,f1,label\n0.5,1.5,2\n-1,0,0\n3,4,2\n");
  auto data = load_dataset(in);
  CHECK(data.schema.task == Task::Classification);
  CHECK(data.schema.dimension == 2);
  CHECK(data.records.size() == 3);
  CHECK(data.records[0].id == 0);
  CHECK(data.records[2].id == 2);
  CHECK(*data.records[0].label == 2);
  CHECK(data.schema.labels == std::vector<int>{0, 2});
  CHECK(data.schema.feature_ranges[0].lo == -1.0);
  CHECK(data.schema.feature_ranges[0].hi == 3.0);
  CHECK(data.schema.feature_ranges[1].hi == 4.0);
}

TEST_CASE("load_dataset regression") {
  std::istringstream in("f0,target\n0.1,1\n0.9,5\n");
  auto data = load_dataset(in);
  CHECK(data.schema.task == Task::Regression);
  CHECK(*data.records[1].target == 5.0);
  CHECK(data.schema.target_range.lo == 1.0);
  CHECK(data.schema.target_range.hi == 5.0);
}

TEST_CASE("load_dataset errors") {
  std::istringstream ragged("f0,f1,label\n1,2,0\n1,2\n");
  CHECK_THROWS_WITH_AS(load_dataset(ragged), doctest::Contains("row 2"), std::runtime_error);

  std::istringstream text("f0,f1,label\nabc,2,0\n");
  CHECK_THROWS_WITH_AS(load_dataset(text), doctest::Contains("column 0"), std::runtime_error);

  std::istringstream badcol("f0,f1,value\n1,2,0\n");
  CHECK_THROWS_AS(load_dataset(badcol), std::runtime_error);

  std::istringstream misnamed("x0,f1,label\n1,2,0\n");
  CHECK_THROWS_AS(load_dataset(misnamed), std::runtime_error);

  std::istringstream empty("");
  CHECK_THROWS_AS(load_dataset(empty), std::runtime_error);
}

TEST_CASE("csv round trip") {
  std::istringstream in("f0,f1,label\n0.5,1.5,2\n-1,0,0\n");
  auto data = load_dataset(in);
  std::ostringstream out;
  save_dataset(data, out);
  std::istringstream again(out.str());
  auto data2 = load_dataset(again);
  REQUIRE(data2.records.size() == data.records.size());
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    CHECK(data2.records[i].features == data.records[i].features);
    CHECK(*data2.records[i].label == *data.records[i].label);
  }
}

namespace {

Dataset grid_dataset(std::size_t n) {
  // n records spread over [0,10), labels 0/1 alternating.
  Dataset data;
  data.schema.dimension = 1;
  data.schema.task = Task::Classification;
  data.schema.labels = {0, 1};
  data.schema.feature_ranges = {{0.0, 10.0}};
  for (std::size_t i = 0; i < n; ++i) {
    Record r;
    r.id = i;
    r.features = {10.0 * static_cast<double>(i) / static_cast<double>(n)};
    r.label = static_cast<int>(i % 2);
    data.records.push_back(r);
  }
  return data;
}

}  // namespace

TEST_CASE("split sizes and partition") {
  auto data = grid_dataset(1000);
  auto preds = build_label_predicates(data.schema, {0, 1});
  Rng rng(42);
  auto split = split_init_pool_test(data, 0.2, 0.1, preds, rng);
  CHECK(split.test.records.size() == 200);
  CHECK(split.init.records.size() == 100);
  CHECK(split.init.records.size() + split.pool.records.size() + split.test.records.size() ==
        1000);

  std::set<std::uint64_t> seen;
  for (const auto* part : {&split.init, &split.pool, &split.test})
    for (const auto& r : part->records) CHECK(seen.insert(r.id).second);
  CHECK(seen.size() == 1000);
}

TEST_CASE("split power-law composition is proportional to permuted position") {
  // 4 predicates, ample availability: the counts must be a permutation of
  // 10/20/30/40 for an init size of 100.
  Dataset data;
  data.schema.dimension = 1;
  data.schema.task = Task::Classification;
  data.schema.labels = {0, 1, 2, 3};
  data.schema.feature_ranges = {{0.0, 1.0}};
  for (std::size_t i = 0; i < 2000; ++i) {
    Record r;
    r.id = i;
    r.features = {0.5};
    r.label = static_cast<int>(i % 4);
    data.records.push_back(r);
  }
  auto preds = build_label_predicates(data.schema, {0, 1, 2, 3});
  Rng rng(7);
  auto split = split_init_pool_test(data, 0.2, 100.0 / 2000.0, preds, rng);
  REQUIRE(split.init.records.size() == 100);
  std::vector<int> counts(4, 0);
  for (const auto& r : split.init.records) counts[static_cast<std::size_t>(*r.label)] += 1;
  std::sort(counts.begin(), counts.end());
  CHECK(counts == std::vector<int>{10, 20, 30, 40});
}

TEST_CASE("split allows an empty init set") {
  auto data = grid_dataset(100);
  auto preds = build_label_predicates(data.schema, {0, 1});
  Rng rng(1);
  auto split = split_init_pool_test(data, 0.2, 0.0, preds, rng);
  CHECK(split.init.records.empty());
  CHECK(split.pool.records.size() == 80);
}

TEST_CASE("split determinism") {
  auto data = grid_dataset(500);
  auto preds = build_label_predicates(data.schema, {0, 1});
  Rng rng1(99), rng2(99);
  auto a = split_init_pool_test(data, 0.25, 0.1, preds, rng1);
  auto b = split_init_pool_test(data, 0.25, 0.1, preds, rng2);
  REQUIRE(a.pool.records.size() == b.pool.records.size());
  for (std::size_t i = 0; i < a.pool.records.size(); ++i)
    CHECK(a.pool.records[i].id == b.pool.records[i].id);
}

TEST_CASE("split validates fractions") {
  auto data = grid_dataset(100);
  auto preds = build_label_predicates(data.schema, {0, 1});
  Rng rng(1);
  CHECK_THROWS_AS(split_init_pool_test(data, 0.0, 0.1, preds, rng), std::invalid_argument);
  CHECK_THROWS_AS(split_init_pool_test(data, 0.6, 0.5, preds, rng), std::invalid_argument);
}
