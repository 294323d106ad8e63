#include "adaptstream/paired_learner.hpp"

namespace adapt {

namespace {

double accuracy_on(const NaiveBayesState& learner, const LabeledBatch& batch) {
  const VectorXd pred = nb_predict(learner, batch.inputs).labels;
  double hits = 0.0;
  for (Eigen::Index r = 0; r < batch.rows(); ++r)
    if (pred(r) == batch.targets(r)) hits += 1.0;
  return hits / static_cast<double>(batch.rows());
}

}  // namespace

PairedLearnerState bpl_create_initial(int n_classes, int theta, const LabeledBatch& batch) {
  if (n_classes < 2) throw ConfigError("bPL requires at least two classes");
  if (theta < 0) throw ConfigError("bPL theta must be >= 0");
  PairedLearnerState state;
  state.n_classes = n_classes;
  state.theta = theta;
  state.stable = nb_update(NaiveBayesState(n_classes), batch);
  state.reactive = nb_update(NaiveBayesState(n_classes), batch);
  return state;
}

PairedLearnerState apply_bpl_am(const PairedLearnerState& state, int am,
                                const LabeledBatch& batch) {
  PairedLearnerState out = state;
  switch (am) {
    case kPam0:
      return out;
    case kPam1:
      out.stable = nb_update(out.stable, batch);
      break;
    case kPam2:
      if (!state.reactive.trained())
        throw MechanismError("PAM2 requires a trained reactive learner");
      out.stable = state.reactive;
      break;
    default:
      throw MechanismError("invalid bPL mechanism id " + std::to_string(am));
  }
  out.reactive = nb_update(NaiveBayesState(out.n_classes), batch);
  return out;
}

PairedLearnerState bpl_custom_step(const PairedLearnerState& state, const LabeledBatch& batch) {
  if (!state.stable.trained() || !state.reactive.trained())
    throw MechanismError("bPL custom step requires both learners trained");
  const double stable_acc = accuracy_on(state.stable, batch);
  const double reactive_acc = accuracy_on(state.reactive, batch);

  PairedLearnerState staged = state;
  if (stable_acc < reactive_acc) {
    staged.change_counter += 1;
  } else if (state.reset_counter_when_stable_wins) {
    staged.change_counter = 0;
  }
  if (staged.change_counter > staged.theta) {
    PairedLearnerState out = apply_bpl_am(staged, kPam2, batch);
    out.change_counter = 0;
    return out;
  }
  return apply_bpl_am(staged, kPam1, batch);
}

}  // namespace adapt
