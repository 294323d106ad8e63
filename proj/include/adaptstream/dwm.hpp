#pragma once

// Batch Dynamic Weighted Majority: a global ensemble of naive Bayes experts
// combined by weighted plurality vote, with eight adaptive mechanisms
// DAM0..DAM7 and the accuracy-vs-majority custom strategy.

#include "adaptstream/common.hpp"
#include "adaptstream/naive_bayes.hpp"

#include <vector>

namespace adapt {

inline constexpr int kDam0 = 0;  // no adaptation
inline constexpr int kDam1 = 1;  // update every expert
inline constexpr int kDam2 = 2;  // weight update e^u, normalize, prune below eta
inline constexpr int kDam3 = 3;  // new expert with raw weight 1
inline constexpr int kDam4 = 4;  // DAM2 then DAM1
inline constexpr int kDam5 = 5;  // DAM1 then DAM3
inline constexpr int kDam6 = 6;  // DAM2 then DAM3
inline constexpr int kDam7 = 7;  // DAM2 then DAM1 then DAM3

struct DwmEnsemble {
  int n_classes = 0;
  double eta = 0.01;  // prune threshold
  std::vector<NaiveBayesState> experts;
  std::vector<double> weights;
  std::vector<double> class_counts;  // labels seen by the custom strategy so far

  bool operator==(const DwmEnsemble& other) const {
    return n_classes == other.n_classes && eta == other.eta && experts == other.experts &&
           weights == other.weights && class_counts == other.class_counts;
  }
};

DwmEnsemble dwm_create_initial(int n_classes, double eta, const LabeledBatch& batch);

/// Weighted plurality vote; vote ties resolve to the lowest class id.
VectorXd dwm_predict(const DwmEnsemble& ensemble, const MatrixXd& inputs);

/// Per-expert accuracy on the batch (the u_i driving DAM2).
std::vector<double> dwm_expert_accuracies(const DwmEnsemble& ensemble, const LabeledBatch& batch);

DwmEnsemble apply_dwm_am(const DwmEnsemble& ensemble, int am, const LabeledBatch& batch);

/// Custom strategy step: DAM1 + DAM2, plus DAM3 when the pre-adaptation
/// ensemble accuracy falls below the historical-majority baseline; finally
/// the batch labels are folded into the running class counts.
DwmEnsemble dwm_custom_step(const DwmEnsemble& ensemble, const LabeledBatch& batch);

}  // namespace adapt
