#pragma once

// Batch Paired Learner: a stable learner serves all predictions while a
// reactive learner is retrained from scratch on each batch. PAM1 grows the
// stable learner, PAM2 replaces it by the reactive one; the custom strategy
// switches once the reactive learner has out-performed the stable one on
// more than theta batches.

#include "adaptstream/common.hpp"
#include "adaptstream/naive_bayes.hpp"

namespace adapt {

inline constexpr int kPam0 = 0;  // no adaptation (strict identity)
inline constexpr int kPam1 = 1;  // update stable learner
inline constexpr int kPam2 = 2;  // switch to reactive learner

struct PairedLearnerState {
  int n_classes = 0;
  int theta = 0;
  bool reset_counter_when_stable_wins = false;  // off: counter is sticky
  int change_counter = 0;
  NaiveBayesState stable;
  NaiveBayesState reactive;

  bool operator==(const PairedLearnerState& other) const {
    return n_classes == other.n_classes && theta == other.theta &&
           reset_counter_when_stable_wins == other.reset_counter_when_stable_wins &&
           change_counter == other.change_counter && stable == other.stable &&
           reactive == other.reactive;
  }
};

PairedLearnerState bpl_create_initial(int n_classes, int theta, const LabeledBatch& batch);

PairedLearnerState apply_bpl_am(const PairedLearnerState& state, int am,
                                const LabeledBatch& batch);

PairedLearnerState bpl_custom_step(const PairedLearnerState& state, const LabeledBatch& batch);

}  // namespace adapt
