#pragma once

// Simple Adaptive Batch Local Ensemble: locally weighted RPLS experts whose
// combination weights come from per-feature 2-D Parzen descriptors over
// (input value, output). Five adaptive mechanisms SAM0..SAM4 plus t-test
// based pruning of redundant experts.

#include "adaptstream/common.hpp"
#include "adaptstream/rpls.hpp"

#include <vector>

namespace adapt {

inline constexpr int kSam0 = 0;  // no adaptation
inline constexpr int kSam1 = 1;  // batch learning (partitioned, lambda = 1)
inline constexpr int kSam2 = 2;  // batch learning with forgetting
inline constexpr int kSam3 = 3;  // descriptors update
inline constexpr int kSam4 = 4;  // creation of new expert (+ pruning)

struct SableParams {
  double sigma = 1.0;    // kernel width in standardized units
  double lambda = 0.5;   // SAM2 forgetting factor
  double delta0 = 0.0;   // weight of the old descriptors in a merge
  double delta1 = 1.0;   // weight of the freshly built descriptors
  int latents = 2;       // RPLS latent variables
  double alpha = 0.05;   // pruning significance threshold
  int resolution = 50;   // descriptor grid cells per axis
  double bound = 4.0;    // grid covers [-bound, bound]^2
  bool welch_ttest = false;

  void validate() const;
};

/// Fixed grid over [-bound, bound]^2 sampled at cell centers; reads are
/// bilinear with out-of-range queries clamped to the border cell.
class DescriptorGrid {
 public:
  DescriptorGrid() = default;
  DescriptorGrid(int resolution, double bound);

  int resolution() const { return resolution_; }
  double bound() const { return bound_; }
  double cell_size() const { return 2.0 * bound_ / resolution_; }
  double center(int i) const { return -bound_ + (i + 0.5) * cell_size(); }

  MatrixXd& cells() { return cells_; }
  const MatrixXd& cells() const { return cells_; }

  double sample(double x, double y) const;
  /// Integral of the grid (cell sum times cell area).
  double mass() const;

  bool same_geometry(const DescriptorGrid& other) const {
    return resolution_ == other.resolution_ && bound_ == other.bound_;
  }
  bool operator==(const DescriptorGrid& other) const {
    return same_geometry(other) && (cells_.array() == other.cells_.array()).all();
  }

 private:
  int resolution_ = 0;
  double bound_ = 0.0;
  MatrixXd cells_;  // (x cell, y cell)
};

struct SableExpert {
  RplsState rpls;
  std::vector<DescriptorGrid> descriptors;  // one per feature
  int created_at = 0;

  bool operator==(const SableExpert& other) const {
    return rpls == other.rpls && descriptors == other.descriptors &&
           created_at == other.created_at;
  }
};

struct SableEnsemble {
  SableParams params;
  VectorXd feature_scale;  // per-feature std, frozen from the first batch
  double target_scale = 1.0;
  std::vector<SableExpert> experts;

  bool operator==(const SableEnsemble& other) const;
};

/// First expert from the first batch; also freezes the standardization scales.
SableEnsemble sable_create_initial(const SableParams& params, const LabeledBatch& batch);

/// Parzen descriptors of one expert on a training set: for each feature an
/// isotropic Gaussian of width sigma is dropped at (x_j^m / sx_m, y_j / sy),
/// scaled by exp(-(yhat_j - y_j)^2) and normalized by the row count.
std::vector<DescriptorGrid> build_descriptors(const SableExpert& expert,
                                              const LabeledBatch& batch,
                                              const VectorXd& feature_scale, double target_scale,
                                              const SableParams& params);

/// Cellwise delta0 * old + delta1 * fresh.
DescriptorGrid merge_descriptors(const DescriptorGrid& old_grid, const DescriptorGrid& new_grid,
                                 double delta0, double delta1);

struct SablePrediction {
  VectorXd predictions;
  MatrixXd expert_weights;  // rows x experts, each row sums to 1
};

SablePrediction sable_predict(const SableEnsemble& ensemble, const MatrixXd& inputs);

/// Row indices per expert, each row going to the expert with the smallest
/// absolute error on it (ties to the lowest expert index).
std::vector<std::vector<Eigen::Index>> partition_by_best_expert(const SableEnsemble& ensemble,
                                                                const LabeledBatch& batch);

SableEnsemble apply_sable_am(const SableEnsemble& ensemble, int am, const LabeledBatch& batch);

/// Iterative merge of statistically indistinguishable experts: while the
/// largest pairwise t-test p-value exceeds alpha, drop the older expert of
/// the pair and add its descriptor grids into the survivor's.
SableEnsemble prune_and_merge_experts(const SableEnsemble& ensemble, const LabeledBatch& batch,
                                      double alpha);

}  // namespace adapt
