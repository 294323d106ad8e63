#pragma once

// Incremental Gaussian Naive Bayes. Per class it keeps a count plus running
// mean/M2 accumulators per feature, merged batch-by-batch so the state is
// independent of how the same rows were split into update calls.

#include "adaptstream/common.hpp"

#include <vector>

namespace adapt {

class NaiveBayesState {
 public:
  NaiveBayesState() = default;
  explicit NaiveBayesState(int n_classes) : n_classes_(n_classes) {}

  int n_classes() const { return n_classes_; }
  Eigen::Index n_features() const { return n_features_; }
  bool trained() const { return total_count_ > 0; }
  double total_count() const { return total_count_; }

  double class_count(int c) const { return counts_[c]; }
  double prior(int c) const { return counts_[c] / total_count_; }
  const VectorXd& class_mean(int c) const { return means_[c]; }
  /// Population variance (M2 / count), unfloored.
  VectorXd class_variance(int c) const;

  bool operator==(const NaiveBayesState& other) const;

  friend NaiveBayesState nb_update(const NaiveBayesState& state, const LabeledBatch& batch);

 private:
  int n_classes_ = 0;
  Eigen::Index n_features_ = 0;
  double total_count_ = 0.0;
  std::vector<double> counts_;
  std::vector<VectorXd> means_;
  std::vector<VectorXd> m2_;  // sum of squared deviations from the mean
};

NaiveBayesState nb_update(const NaiveBayesState& state, const LabeledBatch& batch);

struct NbPrediction {
  VectorXd labels;
  MatrixXd log_scores;  // rows x classes; -inf for classes never observed
  bool cold_start = false;
};

NbPrediction nb_predict(const NaiveBayesState& state, const MatrixXd& inputs);

}  // namespace adapt
