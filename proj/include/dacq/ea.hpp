#pragma once

#include <span>
#include <vector>

#include "dacq/log.hpp"
#include "dacq/novelty.hpp"
#include "dacq/provider.hpp"
#include "dacq/stats.hpp"

namespace dacq {

enum class Allocation { Linear, SquareRoot };

struct EAConfig {
  double l_percent = 5.0;  // init sample: l% of each predicate's pool
  double delta = 0.01;
  Allocation allocation = Allocation::Linear;
  int grid_size = 200;
  ClfConfig clf;
};

// Distributes total_budget - sum(spent) across predicates proportionally to
// u_hat (Linear) or sqrt(u_hat) (SquareRoot), minus what was already spent
// per predicate. Negative shares clamp to 0 and largest-remainder rounding
// plus redistribution (surplus to the highest-utility predicates first,
// overshoot taken from the lowest) make the outputs sum exactly to the
// remaining budget. Zero total utility splits uniformly.
std::vector<long long> allocate(std::span<const UtilityEstimate> estimates,
                                long long total_budget,
                                std::span<const long long> spent,
                                Allocation strategy);

// The estimation-and-allocation strategy: acquire an l% sample per predicate,
// iteratively refine utility estimates while the heuristic reward
// B' * (1 - eps) predicts an improvement, then allocate the remaining budget
// by estimated utility in one pass (descending utility, shortfalls from
// exhausted predicates flowing to the next ranked ones).
AcquisitionLog run_ea(Provider& provider, ConsumerHoldings& holdings,
                      const EAConfig& config, long long budget, Rng& rng);

}  // namespace dacq
