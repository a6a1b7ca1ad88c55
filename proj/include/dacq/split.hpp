#pragma once

#include <vector>

#include "dacq/dataset.hpp"
#include "dacq/predicate.hpp"
#include "dacq/rng.hpp"

namespace dacq {

struct SplitResult {
  Dataset init;
  Dataset pool;
  Dataset test;
};

// Carves a uniform test sample, then draws the initial consumer data from the
// remainder with per-predicate counts proportional to the predicate's position
// in a seeded random permutation (power-law composition). Everything left is
// the provider pool. Quotas exceeding a predicate's availability are reduced
// to availability with a warning.
SplitResult split_init_pool_test(const Dataset& data, double test_fraction,
                                 double init_fraction,
                                 const std::vector<Predicate>& predicates,
                                 Rng& rng);

}  // namespace dacq
