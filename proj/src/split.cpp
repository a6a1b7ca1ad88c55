#include "dacq/split.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "dacq/apportion.hpp"

namespace dacq {

SplitResult split_init_pool_test(const Dataset& data, double test_fraction,
                                 double init_fraction,
                                 const std::vector<Predicate>& predicates, Rng& rng) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("split: test_fraction must be in (0,1)");
  if (!(init_fraction >= 0.0 && init_fraction < 1.0))
    throw std::invalid_argument("split: init_fraction must be in [0,1)");
  if (test_fraction + init_fraction >= 1.0)
    throw std::invalid_argument("split: test_fraction + init_fraction must be < 1");
  if (predicates.empty()) throw std::invalid_argument("split: empty predicate set");

  const std::size_t n = data.records.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  const auto test_size =
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  const auto init_size =
      static_cast<std::size_t>(std::llround(init_fraction * static_cast<double>(n)));

  SplitResult split;
  split.test.schema = split.pool.schema = split.init.schema = data.schema;
  for (std::size_t i = 0; i < test_size; ++i) split.test.records.push_back(data.records[perm[i]]);

  // Group the remainder by first matching predicate; records matching none go
  // straight to the pool.
  std::vector<std::vector<std::size_t>> by_predicate(predicates.size());
  std::vector<std::size_t> unmatched;
  for (std::size_t i = test_size; i < n; ++i) {
    std::size_t rec = perm[i];
    bool hit = false;
    for (const auto& p : predicates) {
      if (matches(p, data.records[rec])) {
        by_predicate[p.index].push_back(rec);
        hit = true;
        break;
      }
    }
    if (!hit) unmatched.push_back(rec);
  }

  // Power-law composition: after a seeded permutation of the predicates, the
  // predicate at position i (1-based) gets a share proportional to i.
  std::vector<std::size_t> pred_order(predicates.size());
  std::iota(pred_order.begin(), pred_order.end(), 0);
  std::shuffle(pred_order.begin(), pred_order.end(), rng);
  std::vector<double> weights(predicates.size(), 0.0);
  for (std::size_t pos = 0; pos < pred_order.size(); ++pos)
    weights[pred_order[pos]] = static_cast<double>(pos + 1);
  auto quota = apportion(weights, static_cast<long long>(init_size));

  for (std::size_t p = 0; p < predicates.size(); ++p) {
    auto& bucket = by_predicate[p];
    auto want = static_cast<std::size_t>(quota[p]);
    if (want > bucket.size()) {
      std::fprintf(stderr,
                   "warning: split quota %zu for predicate %zu reduced to %zu available\n",
                   want, p, bucket.size());
      want = bucket.size();
    }
    // The remainder groups already come from a shuffled pass, but shuffle the
    // bucket so the draw is uniform regardless of predicate geometry.
    std::shuffle(bucket.begin(), bucket.end(), rng);
    for (std::size_t i = 0; i < want; ++i) split.init.records.push_back(data.records[bucket[i]]);
    for (std::size_t i = want; i < bucket.size(); ++i)
      split.pool.records.push_back(data.records[bucket[i]]);
  }
  for (std::size_t rec : unmatched) split.pool.records.push_back(data.records[rec]);

  return split;
}

}  // namespace dacq
