#include "dacq/provider.hpp"

#include <algorithm>
#include <stdexcept>

namespace dacq {

Provider::Provider(Dataset pool, std::vector<Predicate> predicates, std::uint64_t seed)
    : pool_(std::move(pool)), predicates_(std::move(predicates)) {
  if (predicates_.empty()) throw std::invalid_argument("provider: empty predicate set");
  for (std::size_t i = 0; i < predicates_.size(); ++i)
    if (predicates_[i].index != i)
      throw std::invalid_argument("provider: predicate indices must be 0..n-1 in order");

  order_.resize(predicates_.size());
  for (std::size_t pos = 0; pos < pool_.records.size(); ++pos) {
    for (const auto& p : predicates_) {
      if (matches(p, pool_.records[pos])) {
        order_[p.index].push_back(static_cast<std::uint32_t>(pos));
        break;
      }
    }
  }
  Rng rng(seed);
  for (auto& ids : order_) std::shuffle(ids.begin(), ids.end(), rng);

  meta_.schema = pool_.schema;
  meta_.predicate_counts.resize(predicates_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) meta_.predicate_counts[i] = order_[i].size();
}

QueryResult Provider::answer(const Query& query) {
  std::size_t idx = query.predicate.index;
  if (idx >= order_.size())
    throw std::invalid_argument("provider: unknown predicate index " + std::to_string(idx));
  if (query.count < 0) throw std::invalid_argument("provider: negative request count");

  auto& ids = order_[idx];
  const auto give = std::min<std::size_t>(static_cast<std::size_t>(query.count), ids.size());

  QueryResult result;
  result.records.reserve(give);
  for (std::size_t i = 0; i < give; ++i) {
    result.records.push_back(pool_.records[ids.back()]);
    ids.pop_back();
  }
  result.charged = static_cast<long long>(give);
  return result;
}

long long Provider::remaining(std::size_t predicate_index) const {
  if (predicate_index >= order_.size())
    throw std::invalid_argument("provider: unknown predicate index " +
                                std::to_string(predicate_index));
  return static_cast<long long>(order_[predicate_index].size());
}

bool Provider::exhausted() const {
  for (const auto& ids : order_)
    if (!ids.empty()) return false;
  return true;
}

}  // namespace dacq
