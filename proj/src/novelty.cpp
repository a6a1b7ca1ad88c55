#include "dacq/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace dacq {

std::vector<double> encode_record(const Schema& schema, const Record& record) {
  std::vector<double> out = record.features;
  if (schema.task == Task::Classification) {
    if (!record.label)
      throw std::invalid_argument("encode_record: classification record without a label");
    double scale = schema.mean_feature_span();
    if (scale <= 0.0) scale = 1.0;
    for (int label : schema.labels) out.push_back(*record.label == label ? scale : 0.0);
  } else {
    if (!record.target)
      throw std::invalid_argument("encode_record: regression record without a target");
    double span = schema.target_range.hi - schema.target_range.lo;
    out.push_back(span > 0.0 ? (*record.target - schema.target_range.lo) / span : 0.0);
  }
  return out;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

}  // namespace

BinaryClassifier BinaryClassifier::train(const ClfConfig& config, const Schema& schema,
                                         std::span<const Record> owned,
                                         std::span<const Record> fresh) {
  if (fresh.empty()) throw std::invalid_argument("train_clf: fresh set must be non-empty");
  if (config.kind == ClfKind::Knn && (config.k < 1 || config.k % 2 == 0))
    throw std::invalid_argument("train_clf: k must be an odd positive integer");

  BinaryClassifier clf;
  clf.config_ = config;
  clf.schema_ = schema;
  if (owned.empty()) {
    // Nothing to distinguish from: everything is new.
    clf.constant_one_ = true;
    return clf;
  }

  if (config.kind == ClfKind::Knn) {
    clf.points_.reserve(owned.size() + fresh.size());
    clf.classes_.reserve(owned.size() + fresh.size());
    for (const auto& r : owned) {
      clf.points_.push_back(encode_record(schema, r));
      clf.classes_.push_back(0);
      clf.ids_.push_back(r.id);
    }
    for (const auto& r : fresh) {
      clf.points_.push_back(encode_record(schema, r));
      clf.classes_.push_back(1);
      clf.ids_.push_back(r.id);
    }
    return clf;
  }

  // Perceptron, fixed pass order (owned then fresh), no shuffling.
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  for (const auto& r : owned) {
    xs.push_back(encode_record(schema, r));
    ys.push_back(-1);
  }
  for (const auto& r : fresh) {
    xs.push_back(encode_record(schema, r));
    ys.push_back(1);
  }
  clf.weights_.assign(xs.front().size(), 0.0);
  clf.bias_ = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double act = clf.bias_;
      for (std::size_t j = 0; j < xs[i].size(); ++j) act += clf.weights_[j] * xs[i][j];
      if (static_cast<double>(ys[i]) * act <= 0.0) {
        double step = config.learning_rate * static_cast<double>(ys[i]);
        for (std::size_t j = 0; j < xs[i].size(); ++j) clf.weights_[j] += step * xs[i][j];
        clf.bias_ += step;
      }
    }
  }
  return clf;
}

int BinaryClassifier::predict(const Record& record) const {
  if (constant_one_) return 1;
  auto x = encode_record(schema_, record);

  if (config_.kind == ClfKind::Perceptron) {
    double act = bias_;
    for (std::size_t j = 0; j < x.size(); ++j) act += weights_[j] * x[j];
    return act > 0.0 ? 1 : 0;  // ties toward class 0
  }

  // Scoring happens on the records the class-1 side was trained with, so the
  // k-NN search is leave-one-out: the query record itself (matched by id)
  // never votes, otherwise the memorizing classifier would report every
  // trained record as novel.
  std::vector<std::size_t> idx;
  idx.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (ids_[i] != record.id) idx.push_back(i);
  std::vector<double> dist(points_.size());
  for (std::size_t i : idx) dist[i] = sq_dist(points_[i], x);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(config_.k), idx.size());
  if (k == 0) return 1;
  // Equal distances rank class 0 first so novelty is under- rather than
  // over-reported; this also makes predictions independent of input order.
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (dist[a] != dist[b]) return dist[a] < dist[b];
                      return classes_[a] < classes_[b];
                    });
  int ones = 0;
  for (std::size_t i = 0; i < k; ++i) ones += classes_[idx[i]];
  return 2 * ones > static_cast<int>(k) ? 1 : 0;
}

double novelty(const BinaryClassifier& clf, std::span<const Record> fresh) {
  if (fresh.empty()) throw std::invalid_argument("novelty: empty fresh set");
  long long ones = 0;
  for (const auto& r : fresh) ones += clf.predict(r);
  return static_cast<double>(ones) / static_cast<double>(fresh.size());
}

long long reward_count(const BinaryClassifier& clf, std::span<const Record> batch) {
  if (batch.empty()) {
    std::fprintf(stderr, "warning: reward_count on an empty batch\n");
    return 0;
  }
  long long ones = 0;
  for (const auto& r : batch) ones += clf.predict(r);
  return ones;
}

ConsumerHoldings::ConsumerHoldings(Schema schema, std::vector<Predicate> predicates)
    : schema_(std::move(schema)), predicates_(std::move(predicates)) {
  per_predicate_.resize(predicates_.size());
}

void ConsumerHoldings::add(const Record& record) {
  if (!ids_.insert(record.id).second)
    throw std::invalid_argument("holdings: duplicate record id " + std::to_string(record.id));
  for (const auto& p : predicates_) {
    if (matches(p, record)) {
      per_predicate_[p.index].push_back(record);
      return;
    }
  }
  unmatched_.push_back(record);
}

void ConsumerHoldings::add_all(std::span<const Record> records) {
  for (const auto& r : records) add(r);
}

std::span<const Record> ConsumerHoldings::for_predicate(std::size_t index) const {
  if (index >= per_predicate_.size())
    throw std::invalid_argument("holdings: unknown predicate index " + std::to_string(index));
  return per_predicate_[index];
}

std::vector<Record> ConsumerHoldings::all_records() const {
  std::vector<Record> out;
  out.reserve(ids_.size());
  for (const auto& bucket : per_predicate_) out.insert(out.end(), bucket.begin(), bucket.end());
  out.insert(out.end(), unmatched_.begin(), unmatched_.end());
  return out;
}

}  // namespace dacq
