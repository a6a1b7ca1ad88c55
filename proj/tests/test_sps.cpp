#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "dacq/sps.hpp"

using namespace dacq;

TEST_CASE("posterior update follows the conjugate rule") {
  BetaState state;
  update_posterior(state, 3, 5, std::nullopt);
  CHECK(state.alpha == 4.0);
  CHECK(state.beta == 3.0);

  // All-novel batch leaves beta untouched.
  BetaState all;
  update_posterior(all, 5, 5, std::nullopt);
  CHECK(all.alpha == 6.0);
  CHECK(all.beta == 1.0);

  CHECK_THROWS_AS(update_posterior(state, 6, 5, std::nullopt), std::invalid_argument);
}

TEST_CASE("window of one remembers only the last round") {
  BetaState state;
  update_posterior(state, 3, 5, 1);
  update_posterior(state, 2, 5, 1);
  CHECK(state.alpha == 3.0);
  CHECK(state.beta == 4.0);
  CHECK(state.history.size() == 1);
  CHECK(state.rounds_seen == 2);
}

TEST_CASE("posterior bookkeeping invariants under random sequences") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    for (auto tau : std::vector<std::optional<std::size_t>>{1, 3, std::nullopt}) {
      BetaState state;
      std::uniform_int_distribution<int> rounds_dist(1, 20);
      int rounds = rounds_dist(rng);
      for (int t = 0; t < rounds; ++t) {
        std::uniform_int_distribution<long long> batch_dist(1, 30);
        long long batch = batch_dist(rng);
        std::uniform_int_distribution<long long> reward_dist(0, batch);
        update_posterior(state, reward_dist(rng), batch, tau);
      }
      long long sum_i = 0, sum_n = 0;
      for (const auto& [n, i] : state.history) {
        sum_n += n;
        sum_i += i;
      }
      CHECK(state.alpha - 1.0 == static_cast<double>(sum_n));
      CHECK(state.alpha + state.beta - 2.0 == static_cast<double>(sum_i));
      CHECK(state.alpha >= 1.0);
      CHECK(state.beta >= 1.0);
      std::size_t want = tau ? std::min<std::size_t>(*tau, static_cast<std::size_t>(rounds))
                             : static_cast<std::size_t>(rounds);
      CHECK(state.history.size() == want);
    }
  }
}

TEST_CASE("beta sampling moments and determinism") {
  BetaState uniform;  // Beta(1,1)
  Rng rng(23);
  double total = 0.0;
  const int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) total += sample_reward(uniform, rng);
  CHECK(std::fabs(total / kDraws - 0.5) <= 0.01);

  BetaState peaked;
  peaked.alpha = 1000.0;
  peaked.beta = 1.0;
  for (int i = 0; i < 10000; ++i) CHECK(sample_reward(peaked, rng) > 0.9);

  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) CHECK(sample_reward(uniform, a) == sample_reward(uniform, b));
}

namespace {

Dataset cluster_pool(std::size_t per_cluster) {
  Dataset pool;
  pool.schema.dimension = 1;
  pool.schema.task = Task::Classification;
  pool.schema.labels = {0, 1};
  pool.schema.feature_ranges = {{-10.0, 10.0}};
  std::uint64_t id = 0;
  for (int cluster : {0, 1}) {
    double center = cluster == 0 ? -5.0 : 5.0;
    for (std::size_t i = 0; i < per_cluster; ++i) {
      Record r;
      r.id = id++;
      r.features = {center + 0.001 * static_cast<double>(i)};
      r.label = cluster;
      pool.records.push_back(r);
    }
  }
  return pool;
}

// Stationary two-armed environment: rewards are Binomial draws with fixed
// success rates, independent of what was actually received.
class FixedRateMeasure : public RewardMeasure {
 public:
  FixedRateMeasure(std::vector<double> rates, std::uint64_t seed)
      : rates_(std::move(rates)), rng_(seed) {}
  long long reward(std::size_t predicate, std::span<const Record> batch,
                   const ConsumerHoldings&) override {
    std::binomial_distribution<long long> dist(static_cast<long long>(batch.size()),
                                               rates_[predicate]);
    return dist(rng_);
  }

 private:
  std::vector<double> rates_;
  Rng rng_;
};

}  // namespace

TEST_CASE("run_sps degenerate budgets") {
  auto pool = cluster_pool(40);
  auto preds = build_label_predicates(pool.schema, {0, 1});
  Provider provider(pool, preds, 3);
  ConsumerHoldings holdings(pool.schema, preds);
  Rng rng(3);
  auto log = run_sps(provider, holdings, SPSConfig{}, 0, rng);
  CHECK(log.interactions.empty());
  CHECK(log.total_charged == 0);
}

TEST_CASE("run_sps single predicate drains the pool") {
  Dataset pool = cluster_pool(50);
  pool.records.resize(50);  // keep only cluster 0
  auto preds = build_label_predicates(pool.schema, {0});
  SPSConfig config;
  config.batch = 7;
  for (long long budget : {30, 500}) {
    Provider provider(pool, preds, 11);
    ConsumerHoldings holdings(pool.schema, preds);
    Rng rng(11);
    auto log = run_sps(provider, holdings, config, budget, rng);
    CHECK(log.total_charged == std::min<long long>(budget, 50));
    CHECK(log.status == (budget > 50 ? RunStatus::PoolExhausted : RunStatus::Completed));
    // Final partial batch requests exactly the remainder.
    for (const auto& inter : log.interactions) CHECK(inter.requested <= config.batch);
  }
}

TEST_CASE("run_sps steers budget to the novel predicate") {
  // Predicate 0 duplicates the holdings, predicate 1 is unseen. Over seeds,
  // the novel side must draw at least 60% of the spend.
  const std::size_t kPerCluster = 600;
  double share_sum = 0.0;
  const int kSeeds = 20;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto pool = cluster_pool(kPerCluster);
    auto preds = build_label_predicates(pool.schema, {0, 1});
    Provider provider(pool, preds, 1000 + static_cast<std::uint64_t>(seed));
    ConsumerHoldings holdings(pool.schema, preds);
    std::vector<Record> dups;
    for (std::size_t i = 0; i < kPerCluster; ++i) {
      Record dup = pool.records[i];
      dup.id = 1000000 + i;
      dups.push_back(dup);
    }
    holdings.add_all(dups);

    SPSConfig config;
    config.batch = 10;
    config.tau = 1;
    Rng rng(500 + static_cast<std::uint64_t>(seed));
    auto log = run_sps(provider, holdings, config, 500, rng);
    REQUIRE(log.total_charged == 500);
    long long novel = 0;
    for (const auto& inter : log.interactions)
      if (inter.predicate == 1) novel += inter.received;
    share_sum += static_cast<double>(novel) / 500.0;
  }
  CHECK(share_sum / kSeeds >= 0.6);
}

TEST_CASE("run_sps regret sanity on a stationary two-armed bandit") {
  // Fixed novelty rates 0.9 vs 0.1: the better arm gets >= 70% of the rounds.
  const int kSeeds = 20;
  double good_rounds = 0.0, all_rounds = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto pool = cluster_pool(1200);
    auto preds = build_label_predicates(pool.schema, {0, 1});
    Provider provider(pool, preds, 70 + static_cast<std::uint64_t>(seed));
    ConsumerHoldings holdings(pool.schema, preds);
    SPSConfig config;
    config.batch = 5;
    config.tau = 3;
    FixedRateMeasure measure({0.9, 0.1}, 900 + static_cast<std::uint64_t>(seed));
    Rng rng(300 + static_cast<std::uint64_t>(seed));
    auto log = run_sps(provider, holdings, config, 5 * 200, rng, measure);
    for (const auto& inter : log.interactions) {
      all_rounds += 1.0;
      if (inter.predicate == 0) good_rounds += 1.0;
    }
  }
  CHECK(good_rounds / all_rounds >= 0.70);
}

TEST_CASE("run_sps is deterministic for a fixed seed") {
  auto pool = cluster_pool(200);
  auto preds = build_label_predicates(pool.schema, {0, 1});
  SPSConfig config;
  config.batch = 9;
  std::vector<std::vector<std::uint64_t>> runs;
  for (int run = 0; run < 2; ++run) {
    Provider provider(pool, preds, 42);
    ConsumerHoldings holdings(pool.schema, preds);
    Rng rng(42);
    auto log = run_sps(provider, holdings, config, 100, rng);
    std::vector<std::uint64_t> ids;
    for (const auto& inter : log.interactions)
      for (auto id : inter.ids) ids.push_back(id);
    runs.push_back(std::move(ids));
  }
  CHECK(runs[0] == runs[1]);
}
