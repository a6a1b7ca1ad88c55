#pragma once

#include <vector>

#include "dacq/dataset.hpp"

namespace dacq {

enum class LearnerKind { KnnClassifier, KnnRegressor };

struct LearnerConfig {
  LearnerKind kind = LearnerKind::KnnClassifier;
  int k = 5;
};

// Final-model learner: brute-force k-NN with Euclidean distance on raw
// features. Predictions are deterministic; distance ties resolve by training
// insertion order and vote ties by the smaller label.
class Learner {
 public:
  static Learner train(const LearnerConfig& config, const Schema& schema,
                       std::vector<Record> data);

  int predict_label(const Record& record) const;
  double predict_target(const Record& record) const;

  const LearnerConfig& config() const { return config_; }

 private:
  LearnerConfig config_;
  Schema schema_;
  std::vector<Record> train_;
};

// Fraction of test records with the predicted label equal to the true label.
double accuracy(const Learner& model, const Dataset& test);

// 1 - SS_res/SS_tot on the test targets. Requires non-constant targets.
double r2(const Learner& model, const Dataset& test);

}  // namespace dacq
