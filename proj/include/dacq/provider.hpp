#pragma once

#include <cstdint>
#include <vector>

#include "dacq/dataset.hpp"
#include "dacq/predicate.hpp"
#include "dacq/rng.hpp"

namespace dacq {

struct Metadata {
  Schema schema;
  // Per-predicate record counts at construction time; they do not shrink as
  // records are sold.
  std::vector<std::size_t> predicate_counts;
};

struct QueryResult {
  std::vector<Record> records;
  long long charged = 0;  // always equals records.size()
};

// The data provider: answers predicate queries by sampling the pool uniformly
// without replacement. A record, once returned, is never returned again. When
// a request exceeds what is left for the predicate, everything left is
// returned and only that count is charged.
class Provider {
 public:
  Provider(Dataset pool, std::vector<Predicate> predicates, std::uint64_t seed);

  const Metadata& metadata() const { return meta_; }
  QueryResult answer(const Query& query);

  long long remaining(std::size_t predicate_index) const;
  bool exhausted() const;

 private:
  Dataset pool_;
  std::vector<Predicate> predicates_;
  // Per predicate: positions into pool_.records in a pre-shuffled order,
  // served from the back. A single shuffle at construction makes the record
  // sequence independent of how requests are batched.
  std::vector<std::vector<std::uint32_t>> order_;
  Metadata meta_;
};

}  // namespace dacq
