#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "dacq/dataset.hpp"
#include "dacq/predicate.hpp"

namespace dacq {

enum class ClfKind { Knn, Perceptron };

struct ClfConfig {
  ClfKind kind = ClfKind::Knn;
  int k = 1;  // odd
  int epochs = 20;
  double learning_rate = 0.1;
};

// Classifier input: feature vector plus the encoded label/target, so novelty
// is measured over (x, y) pairs. Class labels are one-hot scaled by the mean
// feature span; regression targets are min-max normalized by the schema's
// target range.
std::vector<double> encode_record(const Schema& schema, const Record& record);

// Binary classifier separating the consumer's holdings (class 0) from freshly
// acquired records (class 1). With no holdings it degenerates to the
// constant-1 predictor. Since the fresh records are scored after having been
// trained on, the k-NN prediction is leave-one-out (the query record, matched
// by id, is excluded from the neighbour search); distance ties break toward
// class 0.
class BinaryClassifier {
 public:
  static BinaryClassifier train(const ClfConfig& config, const Schema& schema,
                                std::span<const Record> owned,
                                std::span<const Record> fresh);

  int predict(const Record& record) const;

 private:
  ClfConfig config_;
  Schema schema_;
  bool constant_one_ = false;
  // knn
  std::vector<std::vector<double>> points_;
  std::vector<int> classes_;
  std::vector<std::uint64_t> ids_;
  // perceptron
  std::vector<double> weights_;
  double bias_ = 0.0;
};

// Fraction of `fresh` predicted as class 1. This is the utility estimate
// u_hat when fresh is the sample acquired with the predicate.
double novelty(const BinaryClassifier& clf, std::span<const Record> fresh);

// Count of batch records predicted as class 1. Empty batch returns 0 with a
// warning (happens only when a predicate exhausts mid-round).
long long reward_count(const BinaryClassifier& clf, std::span<const Record> batch);

// The records the consumer possesses, routed per predicate. Records matching
// no predicate are retained but take no part in per-predicate novelty.
class ConsumerHoldings {
 public:
  ConsumerHoldings(Schema schema, std::vector<Predicate> predicates);

  void add(const Record& record);
  void add_all(std::span<const Record> records);

  std::span<const Record> for_predicate(std::size_t index) const;
  std::vector<Record> all_records() const;
  bool owns(std::uint64_t id) const { return ids_.count(id) != 0; }
  std::size_t size() const { return ids_.size(); }

  const Schema& schema() const { return schema_; }
  const std::vector<Predicate>& predicates() const { return predicates_; }

 private:
  Schema schema_;
  std::vector<Predicate> predicates_;
  std::vector<std::vector<Record>> per_predicate_;
  std::vector<Record> unmatched_;
  std::unordered_set<std::uint64_t> ids_;
};

}  // namespace dacq
