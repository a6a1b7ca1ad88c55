#include "dacq/sps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dacq {

double sample_reward(const BetaState& state, Rng& rng) {
  std::gamma_distribution<double> ga(state.alpha, 1.0);
  std::gamma_distribution<double> gb(state.beta, 1.0);
  double x = ga(rng);
  double y = gb(rng);
  if (x + y == 0.0) return 0.5;
  return x / (x + y);
}

void update_posterior(BetaState& state, long long reward, long long batch,
                      std::optional<std::size_t> tau) {
  if (reward < 0 || reward > batch)
    throw std::invalid_argument("update_posterior: reward must be in [0, batch]");
  if (tau && *tau == 0) throw std::invalid_argument("update_posterior: tau must be >= 1");
  state.alpha += static_cast<double>(reward);
  state.beta += static_cast<double>(batch - reward);
  state.history.emplace_back(reward, batch);
  state.rounds_seen += 1;
  if (tau && state.history.size() > *tau) {
    auto [old_reward, old_batch] = state.history.front();
    state.history.pop_front();
    state.alpha -= static_cast<double>(old_reward);
    state.beta -= static_cast<double>(old_batch - old_reward);
  }
}

long long resolve_sps_batch(const SPSConfig& config, long long budget) {
  if (config.batch > 0) return config.batch;
  return std::clamp<long long>(budget / 100, 10, 500);
}

NoveltyReward::NoveltyReward(ClfConfig config, Schema schema)
    : config_(std::move(config)), schema_(std::move(schema)) {}

long long NoveltyReward::reward(std::size_t predicate, std::span<const Record> batch,
                                const ConsumerHoldings& holdings) {
  auto clf = BinaryClassifier::train(config_, schema_, holdings.for_predicate(predicate),
                                     batch);
  return reward_count(clf, batch);
}

RetrainReward::RetrainReward(LearnerConfig config, Schema schema,
                             std::span<const Record> initial_holdings, Rng& rng)
    : config_(std::move(config)), schema_(std::move(schema)) {
  // Hold out 20% of the initial data as the surrogate evaluation split; the
  // consumer never sees the real test set during acquisition.
  std::vector<Record> shuffled(initial_holdings.begin(), initial_holdings.end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::size_t eval_size = std::max<std::size_t>(shuffled.size() / 5, 1);
  if (shuffled.size() < 2)
    throw std::invalid_argument("retrain measure: needs at least 2 initial records");
  eval_.schema = schema_;
  eval_.records.assign(shuffled.begin(), shuffled.begin() + static_cast<long>(eval_size));
  training_.assign(shuffled.begin() + static_cast<long>(eval_size), shuffled.end());
  metric_cur_ = metric(training_);
}

double RetrainReward::metric(const std::vector<Record>& training) const {
  auto model = Learner::train(config_, schema_, training);
  return config_.kind == LearnerKind::KnnClassifier ? accuracy(model, eval_)
                                                    : r2(model, eval_);
}

long long RetrainReward::reward(std::size_t predicate, std::span<const Record> batch,
                                const ConsumerHoldings& holdings) {
  (void)predicate;
  (void)holdings;
  std::vector<Record> with_batch = training_;
  with_batch.insert(with_batch.end(), batch.begin(), batch.end());
  metric_pending_ = metric(with_batch);
  double delta = metric_pending_ - metric_cur_;

  // Improvement counted in evaluation records the batch newly got right; a
  // non-improving batch scores zero. Keeps the reward on the integer scale
  // the posterior update expects without any tuned normalization.
  auto fixed = std::llround(delta * static_cast<double>(eval_.records.size()));
  return std::clamp<long long>(fixed, 0, static_cast<long long>(batch.size()));
}

void RetrainReward::on_batch_merged(std::size_t predicate,
                                    std::span<const Record> batch) {
  (void)predicate;
  training_.insert(training_.end(), batch.begin(), batch.end());
  metric_cur_ = metric_pending_;
}

AcquisitionLog run_sps(Provider& provider, ConsumerHoldings& holdings,
                       const SPSConfig& config, long long budget, Rng& rng) {
  if (config.measure == SpsMeasure::Retrain) {
    auto initial = holdings.all_records();
    RetrainReward measure(config.retrain_learner, holdings.schema(), initial, rng);
    return run_sps(provider, holdings, config, budget, rng, measure);
  }
  NoveltyReward measure(config.clf, holdings.schema());
  return run_sps(provider, holdings, config, budget, rng, measure);
}

AcquisitionLog run_sps(Provider& provider, ConsumerHoldings& holdings,
                       const SPSConfig& config, long long budget, Rng& rng,
                       RewardMeasure& measure) {
  if (budget < 0) throw std::invalid_argument("sps: negative budget");
  if (config.tau && *config.tau == 0) throw std::invalid_argument("sps: tau must be >= 1");

  const std::size_t m = provider.metadata().predicate_counts.size();
  AcquisitionLog log;
  if (budget == 0) return log;
  const long long batch_size = resolve_sps_batch(config, budget);

  std::vector<BetaState> states(m);
  std::vector<std::size_t> live;
  for (std::size_t p = 0; p < m; ++p) live.push_back(p);

  long long remaining = budget;
  while (remaining > 0 && !live.empty()) {
    // Draw in ascending predicate order; argmax ties go to the lowest index.
    std::size_t best = live.front();
    double best_reward = -1.0;
    for (std::size_t p : live) {
      double r = sample_reward(states[p], rng);
      if (r > best_reward) {
        best_reward = r;
        best = p;
      }
    }

    long long want = std::min(batch_size, remaining);
    auto result = provider.answer(Query{holdings.predicates()[best], want});
    auto got = static_cast<long long>(result.records.size());

    Interaction inter;
    inter.predicate = best;
    inter.requested = want;
    inter.received = got;
    inter.phase = Phase::Round;
    for (const auto& r : result.records) inter.ids.push_back(r.id);
    log.interactions.push_back(std::move(inter));

    if (got > 0) {
      long long reward = measure.reward(best, result.records, holdings);
      update_posterior(states[best], reward, got, config.tau);
      holdings.add_all(result.records);
      measure.on_batch_merged(best, result.records);
      log.total_charged += result.charged;
      remaining -= result.charged;
    }
    if (got < want) live.erase(std::find(live.begin(), live.end(), best));
  }

  log.status = remaining > 0 ? RunStatus::PoolExhausted : RunStatus::Completed;
  return log;
}

}  // namespace dacq
