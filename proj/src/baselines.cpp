#include "dacq/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dacq/sps.hpp"

namespace dacq {

namespace {

// Largest-remainder split of `total` over the live predicates by weight;
// all-zero weights fall back to an even split. Ties favour lower indices.
std::vector<long long> weighted_shares(const std::vector<double>& weights, long long total) {
  const std::size_t m = weights.size();
  std::vector<long long> out(m, 0);
  double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> w = weights;
  if (wsum <= 0.0) {
    w.assign(m, 1.0);
    wsum = static_cast<double>(m);
  }
  std::vector<double> rem(m);
  long long assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double share = static_cast<double>(total) * w[i] / wsum;
    out[i] = static_cast<long long>(std::floor(share));
    rem[i] = share - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; assigned < total; ++assigned, ++i) out[order[i % m]] += 1;
  return out;
}

struct RoundRunner {
  Provider& provider;
  ConsumerHoldings& holdings;
  AcquisitionLog log;
  long long remaining;
  std::vector<std::size_t> live;

  RoundRunner(Provider& p, ConsumerHoldings& h, long long budget)
      : provider(p), holdings(h), remaining(budget) {
    for (std::size_t i = 0; i < p.metadata().predicate_counts.size(); ++i) live.push_back(i);
  }

  // One round: distribute `batch` across the live predicates by weight and
  // issue one query each. Exhausted predicates leave the live set; their
  // share returns to the budget and redistributes in later rounds.
  std::vector<Record> round(long long batch, const std::vector<double>& live_weights) {
    auto shares = weighted_shares(live_weights, std::min(batch, remaining));
    std::vector<Record> received;
    std::vector<std::size_t> still_live;
    for (std::size_t li = 0; li < live.size(); ++li) {
      std::size_t p = live[li];
      long long want = std::min(shares[li], remaining);
      bool dead = false;
      if (want > 0) {
        auto result = provider.answer(Query{holdings.predicates()[p], want});
        auto got = static_cast<long long>(result.records.size());
        Interaction inter;
        inter.predicate = p;
        inter.requested = want;
        inter.received = got;
        inter.phase = Phase::Round;
        for (const auto& r : result.records) inter.ids.push_back(r.id);
        log.interactions.push_back(std::move(inter));
        log.total_charged += result.charged;
        remaining -= result.charged;
        holdings.add_all(result.records);
        for (auto& r : result.records) received.push_back(std::move(r));
        dead = got < want;
      }
      if (!dead) still_live.push_back(p);
    }
    live = std::move(still_live);
    return received;
  }

  AcquisitionLog finish() {
    log.status = remaining > 0 ? RunStatus::PoolExhausted : RunStatus::Completed;
    return std::move(log);
  }
};

void validate_baseline(const BaselineConfig& config, long long budget) {
  if (budget < 0) throw std::invalid_argument("baseline: negative budget");
  if (config.batch < 0) throw std::invalid_argument("baseline: negative batch");
}

int predicate_label(const Predicate& p) {
  const auto* eq = std::get_if<LabelEquals>(&p.selector);
  if (!eq)
    throw std::invalid_argument("class-selection baselines need label predicates");
  return eq->label;
}

}  // namespace

AcquisitionLog run_acs_uniform(Provider& provider, ConsumerHoldings& holdings,
                               const BaselineConfig& config, long long budget, Rng& rng) {
  (void)rng;
  validate_baseline(config, budget);
  if (budget == 0) return {};
  long long batch = config.batch > 0 ? config.batch
                                     : std::clamp<long long>(budget / 100, 10, 500);
  if (batch < static_cast<long long>(provider.metadata().predicate_counts.size()))
    throw std::invalid_argument("acs-uniform: batch must be >= the number of predicates");

  RoundRunner run(provider, holdings, budget);
  while (run.remaining > 0 && !run.live.empty())
    run.round(batch, std::vector<double>(run.live.size(), 1.0));
  return run.finish();
}

namespace {

// Shared loop for the retraining baselines. `weigh` maps the previous and
// current model to per-live-predicate weights for the next round; round 1 is
// uniform (there is no previous round to learn from).
template <typename WeighFn>
AcquisitionLog run_retraining_baseline(Provider& provider, ConsumerHoldings& holdings,
                                       const BaselineConfig& config, long long budget,
                                       Rng& rng, WeighFn weigh) {
  validate_baseline(config, budget);
  if (holdings.schema().task != Task::Classification)
    throw std::invalid_argument("class-selection baselines need a classification task");
  if (budget == 0) return {};
  long long batch = config.batch > 0 ? config.batch
                                     : std::clamp<long long>(budget / 100, 10, 500);

  // Surrogate validation split: a seeded 20% carve-out of the initial
  // holdings. The learner trains on the rest plus everything acquired.
  auto initial = holdings.all_records();
  std::shuffle(initial.begin(), initial.end(), rng);
  std::size_t eval_size = initial.size() / 5;
  Dataset eval;
  eval.schema = holdings.schema();
  eval.records.assign(initial.begin(), initial.begin() + static_cast<long>(eval_size));
  std::vector<Record> training(initial.begin() + static_cast<long>(eval_size), initial.end());

  auto previous = Learner::train(config.learner, holdings.schema(), training);

  RoundRunner run(provider, holdings, budget);
  bool first_round = true;
  while (run.remaining > 0 && !run.live.empty()) {
    std::vector<double> weights(run.live.size(), 1.0);
    if (!first_round) {
      auto current = Learner::train(config.learner, holdings.schema(), training);
      weights = weigh(previous, current, run.live, eval, training);
      previous = std::move(current);
    }
    first_round = false;
    auto received = run.round(batch, weights);
    training.insert(training.end(), received.begin(), received.end());
  }
  return run.finish();
}

}  // namespace

AcquisitionLog run_acs_ai(Provider& provider, ConsumerHoldings& holdings,
                          const BaselineConfig& config, long long budget, Rng& rng) {
  // Weight = previous round's per-class accuracy improvement, floored at 0.
  auto per_class_accuracy = [](const Learner& model, const Dataset& eval, int label) {
    long long total = 0, hits = 0;
    for (const auto& r : eval.records) {
      if (*r.label != label) continue;
      ++total;
      if (model.predict_label(r) == label) ++hits;
    }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  };
  return run_retraining_baseline(
      provider, holdings, config, budget, rng,
      [&](const Learner& prev, const Learner& cur, const std::vector<std::size_t>& live,
          const Dataset& eval, const std::vector<Record>&) {
        std::vector<double> w(live.size(), 0.0);
        for (std::size_t i = 0; i < live.size(); ++i) {
          int label = predicate_label(holdings.predicates()[live[i]]);
          w[i] = std::max(0.0, per_class_accuracy(cur, eval, label) -
                                   per_class_accuracy(prev, eval, label));
        }
        return w;
      });
}

AcquisitionLog run_acs_rd(Provider& provider, ConsumerHoldings& holdings,
                          const BaselineConfig& config, long long budget, Rng& rng) {
  // Weight = count of held records in the class whose predicted label changed
  // between the last two models.
  return run_retraining_baseline(
      provider, holdings, config, budget, rng,
      [&](const Learner& prev, const Learner& cur, const std::vector<std::size_t>& live,
          const Dataset&, const std::vector<Record>& training) {
        std::vector<double> w(live.size(), 0.0);
        for (const auto& r : training) {
          if (prev.predict_label(r) == cur.predict_label(r)) continue;
          for (std::size_t i = 0; i < live.size(); ++i) {
            if (predicate_label(holdings.predicates()[live[i]]) == *r.label) {
              w[i] += 1.0;
              break;
            }
          }
        }
        return w;
      });
}

double retraining_utility(const LearnerConfig& config, const Schema& schema,
                          std::span<const Record> holdings,
                          std::span<const Record> batch, const Dataset& eval_split) {
  if (eval_split.records.empty())
    throw std::invalid_argument("retraining_utility: empty eval split");
  auto metric = [&](std::vector<Record> training) {
    auto model = Learner::train(config, schema, std::move(training));
    return config.kind == LearnerKind::KnnClassifier ? accuracy(model, eval_split)
                                                     : r2(model, eval_split);
  };
  std::vector<Record> base(holdings.begin(), holdings.end());
  std::vector<Record> extended = base;
  extended.insert(extended.end(), batch.begin(), batch.end());
  return metric(std::move(extended)) - metric(std::move(base));
}

}  // namespace dacq
