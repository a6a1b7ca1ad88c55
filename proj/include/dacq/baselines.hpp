#pragma once

#include <span>

#include "dacq/learner.hpp"
#include "dacq/log.hpp"
#include "dacq/novelty.hpp"
#include "dacq/provider.hpp"

namespace dacq {

enum class BaselineKind { Uniform, AccuracyImprovement, RedistributedLabels };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::Uniform;
  long long batch = 0;  // 0 = auto: ~1% of budget clamped to [10, 500]
  LearnerConfig learner;  // retraining variants only
};

// Active-class-selection baselines. Each round acquires a batch of b records:
// split evenly (Uniform), in proportion to the previous round's per-class
// accuracy improvement (AccuracyImprovement), or to the per-class count of
// records whose predicted label changed between the last two models
// (RedistributedLabels). The retraining variants bootstrap round 1 uniformly
// and score accuracy on a seeded 20% carve-out of the initial holdings.
AcquisitionLog run_acs_uniform(Provider& provider, ConsumerHoldings& holdings,
                               const BaselineConfig& config, long long budget,
                               Rng& rng);
AcquisitionLog run_acs_ai(Provider& provider, ConsumerHoldings& holdings,
                          const BaselineConfig& config, long long budget,
                          Rng& rng);
AcquisitionLog run_acs_rd(Provider& provider, ConsumerHoldings& holdings,
                          const BaselineConfig& config, long long budget,
                          Rng& rng);

// metric(model retrained on holdings + batch) - metric(model on holdings),
// evaluated on eval_split. Negative values are allowed.
double retraining_utility(const LearnerConfig& config, const Schema& schema,
                          std::span<const Record> holdings,
                          std::span<const Record> batch,
                          const Dataset& eval_split);

}  // namespace dacq
