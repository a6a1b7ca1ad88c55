#include "dacq/learner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace dacq {

Learner Learner::train(const LearnerConfig& config, const Schema& schema,
                       std::vector<Record> data) {
  if (config.k < 1) throw std::invalid_argument("learner: k must be >= 1");
  if (config.kind == LearnerKind::KnnClassifier && schema.task != Task::Classification)
    throw std::invalid_argument("learner: classifier on a regression schema");
  if (config.kind == LearnerKind::KnnRegressor && schema.task != Task::Regression)
    throw std::invalid_argument("learner: regressor on a classification schema");
  Learner m;
  m.config_ = config;
  m.schema_ = schema;
  m.train_ = std::move(data);
  return m;
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

std::vector<std::size_t> nearest(const std::vector<Record>& train,
                                 const Record& query, std::size_t k) {
  std::vector<double> dist(train.size());
  for (std::size_t i = 0; i < train.size(); ++i)
    dist[i] = sq_dist(train[i].features, query.features);
  std::vector<std::size_t> idx(train.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (dist[a] != dist[b]) return dist[a] < dist[b];
                      return a < b;  // training order breaks distance ties
                    });
  idx.resize(k);
  return idx;
}

}  // namespace

int Learner::predict_label(const Record& record) const {
  if (config_.kind != LearnerKind::KnnClassifier)
    throw std::invalid_argument("learner: predict_label on a regressor");
  if (train_.empty()) return schema_.labels.front();  // untrained fallback
  auto k = std::min<std::size_t>(static_cast<std::size_t>(config_.k), train_.size());
  std::map<int, int> votes;
  for (std::size_t i : nearest(train_, record, k)) votes[*train_[i].label] += 1;
  int best_label = votes.begin()->first;
  int best_count = votes.begin()->second;
  for (const auto& [label, count] : votes) {
    if (count > best_count) {  // vote ties keep the smaller label
      best_count = count;
      best_label = label;
    }
  }
  return best_label;
}

double Learner::predict_target(const Record& record) const {
  if (config_.kind != LearnerKind::KnnRegressor)
    throw std::invalid_argument("learner: predict_target on a classifier");
  if (train_.empty())
    return 0.5 * (schema_.target_range.lo + schema_.target_range.hi);
  auto k = std::min<std::size_t>(static_cast<std::size_t>(config_.k), train_.size());
  double sum = 0.0;
  for (std::size_t i : nearest(train_, record, k)) sum += *train_[i].target;
  return sum / static_cast<double>(k);
}

double accuracy(const Learner& model, const Dataset& test) {
  if (test.records.empty()) throw std::invalid_argument("accuracy: empty test set");
  long long hits = 0;
  for (const auto& r : test.records)
    if (model.predict_label(r) == *r.label) ++hits;
  return static_cast<double>(hits) / static_cast<double>(test.records.size());
}

double r2(const Learner& model, const Dataset& test) {
  if (test.records.empty()) throw std::invalid_argument("r2: empty test set");
  double mean = 0.0;
  for (const auto& r : test.records) mean += *r.target;
  mean /= static_cast<double>(test.records.size());

  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& r : test.records) {
    double err = *r.target - model.predict_target(r);
    ss_res += err * err;
    ss_tot += (*r.target - mean) * (*r.target - mean);
  }
  if (ss_tot == 0.0) throw std::invalid_argument("r2: constant test targets");
  return 1.0 - ss_res / ss_tot;
}

}  // namespace dacq
