#include "adaptstream/naive_bayes.hpp"

#include <cmath>
#include <limits>

namespace adapt {

namespace {
constexpr double kVarianceFloor = 1e-9;
}

VectorXd NaiveBayesState::class_variance(int c) const {
  if (counts_[c] <= 0.0) return VectorXd::Zero(n_features_);
  return m2_[c] / counts_[c];
}

bool NaiveBayesState::operator==(const NaiveBayesState& other) const {
  if (n_classes_ != other.n_classes_ || n_features_ != other.n_features_ ||
      total_count_ != other.total_count_ || counts_ != other.counts_)
    return false;
  for (int c = 0; c < n_classes_; ++c) {
    if (means_[c].size() != other.means_[c].size() || m2_[c].size() != other.m2_[c].size())
      return false;
    if ((means_[c].array() != other.means_[c].array()).any()) return false;
    if ((m2_[c].array() != other.m2_[c].array()).any()) return false;
  }
  return true;
}

NaiveBayesState nb_update(const NaiveBayesState& state, const LabeledBatch& batch) {
  if (state.n_classes_ < 1) throw ConfigError("naive Bayes state has no class count configured");
  validate_batch(batch, TaskKind::classification, state.n_classes_);

  NaiveBayesState out = state;
  if (out.n_features_ == 0 && out.total_count_ == 0.0) {
    out.n_features_ = batch.cols();
  } else if (batch.cols() != out.n_features_) {
    throw DimensionError("naive Bayes feature count mismatch");
  }
  if (out.counts_.empty()) {
    out.counts_.assign(out.n_classes_, 0.0);
    out.means_.assign(out.n_classes_, VectorXd::Zero(out.n_features_));
    out.m2_.assign(out.n_classes_, VectorXd::Zero(out.n_features_));
  }

  // Two-pass batch statistics per class, then a Chan merge into the state.
  for (int c = 0; c < out.n_classes_; ++c) {
    double n_b = 0.0;
    VectorXd sum = VectorXd::Zero(out.n_features_);
    for (Eigen::Index r = 0; r < batch.rows(); ++r) {
      if (static_cast<int>(batch.targets(r)) != c) continue;
      n_b += 1.0;
      sum += batch.inputs.row(r).transpose();
    }
    if (n_b == 0.0) continue;
    const VectorXd mean_b = sum / n_b;
    VectorXd m2_b = VectorXd::Zero(out.n_features_);
    for (Eigen::Index r = 0; r < batch.rows(); ++r) {
      if (static_cast<int>(batch.targets(r)) != c) continue;
      const VectorXd d = batch.inputs.row(r).transpose() - mean_b;
      m2_b += d.cwiseProduct(d);
    }

    const double n_a = out.counts_[c];
    const double n = n_a + n_b;
    const VectorXd delta = mean_b - out.means_[c];
    out.means_[c] += delta * (n_b / n);
    out.m2_[c] += m2_b + delta.cwiseProduct(delta) * (n_a * n_b / n);
    out.counts_[c] = n;
    out.total_count_ += n_b;
  }
  return out;
}

NbPrediction nb_predict(const NaiveBayesState& state, const MatrixXd& inputs) {
  NbPrediction out;
  const Eigen::Index rows = inputs.rows();
  const int classes = std::max(state.n_classes(), 1);
  out.labels = VectorXd::Zero(rows);
  out.log_scores = MatrixXd::Constant(rows, classes, -std::numeric_limits<double>::infinity());
  if (!state.trained()) {
    out.cold_start = true;
    return out;
  }
  if (inputs.cols() != state.n_features())
    throw DimensionError("naive Bayes predict feature count mismatch");

  const double log_total = std::log(state.total_count());
  std::vector<VectorXd> floored_var(classes);
  std::vector<VectorXd> log_norm(classes);
  for (int c = 0; c < classes; ++c) {
    if (state.class_count(c) <= 0.0) continue;
    floored_var[c] = state.class_variance(c).cwiseMax(kVarianceFloor);
    log_norm[c] = (-0.5) * (floored_var[c].array() * 2.0 * M_PI).log().matrix();
  }

  for (Eigen::Index r = 0; r < rows; ++r) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < classes; ++c) {
      if (state.class_count(c) <= 0.0) continue;
      const VectorXd d = inputs.row(r).transpose() - state.class_mean(c);
      double score = std::log(state.class_count(c)) - log_total;
      score += log_norm[c].sum();
      score -= 0.5 * (d.cwiseProduct(d).cwiseQuotient(floored_var[c])).sum();
      out.log_scores(r, c) = score;
      if (score > best_score) {  // strict: ties keep the lowest class id
        best_score = score;
        best = c;
      }
    }
    out.labels(r) = best;
  }
  return out;
}

}  // namespace adapt
