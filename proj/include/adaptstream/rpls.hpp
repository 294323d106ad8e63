#pragma once

// Recursive partial least squares for single-output regression. The model is
// kept as weighted first/second moment accumulators, so an update never needs
// the historical rows: the forgetting factor scales the accumulators and the
// new batch is added with unit row weight. Coefficients are refit from the
// centered covariance statistics after every update (kernel PLS recursion on
// X'X and X'y).

#include "adaptstream/common.hpp"

namespace adapt {

class RplsState {
 public:
  RplsState() = default;
  RplsState(int latents, double lambda);

  bool trained() const { return weight_ > 0.0; }
  Eigen::Index n_features() const { return sum_x_.size(); }
  int latents() const { return latents_; }
  double lambda() const { return lambda_; }
  double effective_weight() const { return weight_; }

  /// Prediction is mean_y + (x - mean_x) . coef.
  const VectorXd& coefficients() const { return coef_; }
  const VectorXd& input_mean() const { return mean_x_; }
  double output_mean() const { return mean_y_; }

  bool operator==(const RplsState& other) const;

  friend RplsState rpls_update(const RplsState& state, const LabeledBatch& batch, double lambda);

 private:
  void refit();

  int latents_ = 1;
  double lambda_ = 1.0;
  double weight_ = 0.0;  // accumulated effective sample weight
  VectorXd sum_x_;
  double sum_y_ = 0.0;
  MatrixXd sum_xx_;
  VectorXd sum_xy_;

  VectorXd mean_x_;
  double mean_y_ = 0.0;
  VectorXd coef_;
};

/// Scale history by lambda, absorb the batch, refit. lambda must be in (0, 1].
RplsState rpls_update(const RplsState& state, const LabeledBatch& batch, double lambda);

/// Update with the state's configured forgetting factor.
RplsState rpls_update(const RplsState& state, const LabeledBatch& batch);

struct RplsPrediction {
  VectorXd values;
  bool cold_start = false;
};

RplsPrediction rpls_predict(const RplsState& state, const MatrixXd& inputs);

}  // namespace adapt
