#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <span>

#include "dacq/learner.hpp"
#include "dacq/log.hpp"
#include "dacq/novelty.hpp"
#include "dacq/provider.hpp"

namespace dacq {

// Beta reward posterior with a sliding window: alpha-1 and beta-1 are the
// novel / non-novel record counts within the last tau rounds for the
// predicate.
struct BetaState {
  double alpha = 1.0;
  double beta = 1.0;
  std::deque<std::pair<long long, long long>> history;  // (reward N, batch I)
  long long rounds_seen = 0;
};

double sample_reward(const BetaState& state, Rng& rng);

// Adds (N, I-N) to (alpha, beta); when the window overflows tau the oldest
// round's contribution is subtracted. tau = nullopt keeps everything.
void update_posterior(BetaState& state, long long reward, long long batch,
                      std::optional<std::size_t> tau);

enum class SpsMeasure { Novelty, Retrain };

struct SPSConfig {
  long long batch = 0;  // 0 = auto: ~1% of budget clamped to [10, 500]
  std::optional<std::size_t> tau = 1;  // nullopt = unbounded window
  ClfConfig clf;
  SpsMeasure measure = SpsMeasure::Novelty;
  LearnerConfig retrain_learner;  // used when measure == Retrain
};

long long resolve_sps_batch(const SPSConfig& config, long long budget);

// Scores a received batch with an integer reward in [0, batch size].
class RewardMeasure {
 public:
  virtual ~RewardMeasure() = default;
  virtual long long reward(std::size_t predicate, std::span<const Record> batch,
                           const ConsumerHoldings& holdings) = 0;
  // Called after the batch has been merged into the holdings.
  virtual void on_batch_merged(std::size_t predicate,
                               std::span<const Record> batch) {
    (void)predicate;
    (void)batch;
  }
};

// Default measure: the count of batch records the novelty classifier labels
// as new.
class NoveltyReward : public RewardMeasure {
 public:
  NoveltyReward(ClfConfig config, Schema schema);
  long long reward(std::size_t predicate, std::span<const Record> batch,
                   const ConsumerHoldings& holdings) override;

 private:
  ClfConfig config_;
  Schema schema_;
};

// Retraining-based measure: the model-accuracy improvement from adding the
// batch, evaluated on a held-out slice of the initial holdings and counted in
// evaluation records newly gotten right.
class RetrainReward : public RewardMeasure {
 public:
  RetrainReward(LearnerConfig config, Schema schema,
                std::span<const Record> initial_holdings, Rng& rng);
  long long reward(std::size_t predicate, std::span<const Record> batch,
                   const ConsumerHoldings& holdings) override;
  void on_batch_merged(std::size_t predicate,
                       std::span<const Record> batch) override;

 private:
  double metric(const std::vector<Record>& training) const;

  LearnerConfig config_;
  Schema schema_;
  Dataset eval_;
  std::vector<Record> training_;
  double metric_cur_ = 0.0;
  double metric_pending_ = 0.0;
};

// Sequential predicate selection: Thompson Sampling over per-predicate Beta
// posteriors, one small batch per round, sliding-window forgetting.
AcquisitionLog run_sps(Provider& provider, ConsumerHoldings& holdings,
                       const SPSConfig& config, long long budget, Rng& rng);
AcquisitionLog run_sps(Provider& provider, ConsumerHoldings& holdings,
                       const SPSConfig& config, long long budget, Rng& rng,
                       RewardMeasure& measure);

}  // namespace dacq
