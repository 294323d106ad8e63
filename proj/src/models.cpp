#include "adaptstream/models.hpp"

namespace adapt {

namespace {

[[noreturn]] void untrained_error(const std::string& what) {
  throw ConfigError(what + " used before initial training");
}

}  // namespace

VectorXd SableModel::predict(const MatrixXd& inputs) const {
  if (!ensemble_) untrained_error("SABLE model");
  return sable_predict(*ensemble_, inputs).predictions;
}

void SableModel::train_initial(const LabeledBatch& batch) {
  ensemble_ = sable_create_initial(params_, batch);
}

void SableModel::apply_mechanism(int am_id, const LabeledBatch& batch) {
  if (!ensemble_) untrained_error("SABLE model");
  ensemble_ = apply_sable_am(*ensemble_, am_id, batch);
}

bool SableModel::equals(const Model& other) const {
  const auto* o = dynamic_cast<const SableModel*>(&other);
  if (!o || trained() != o->trained()) return false;
  return !trained() || *ensemble_ == *o->ensemble_;
}

const SableEnsemble& SableModel::ensemble() const {
  if (!ensemble_) untrained_error("SABLE model");
  return *ensemble_;
}

VectorXd DwmModel::predict(const MatrixXd& inputs) const {
  if (!ensemble_) untrained_error("bDWM model");
  return dwm_predict(*ensemble_, inputs);
}

void DwmModel::train_initial(const LabeledBatch& batch) {
  ensemble_ = dwm_create_initial(n_classes_, eta_, batch);
}

void DwmModel::apply_mechanism(int am_id, const LabeledBatch& batch) {
  if (!ensemble_) untrained_error("bDWM model");
  ensemble_ = apply_dwm_am(*ensemble_, am_id, batch);
}

void DwmModel::apply_custom(const LabeledBatch& batch) {
  if (!ensemble_) untrained_error("bDWM model");
  ensemble_ = dwm_custom_step(*ensemble_, batch);
}

bool DwmModel::equals(const Model& other) const {
  const auto* o = dynamic_cast<const DwmModel*>(&other);
  if (!o || trained() != o->trained()) return false;
  return !trained() || *ensemble_ == *o->ensemble_;
}

const DwmEnsemble& DwmModel::ensemble() const {
  if (!ensemble_) untrained_error("bDWM model");
  return *ensemble_;
}

VectorXd PlModel::predict(const MatrixXd& inputs) const {
  if (!state_) untrained_error("bPL model");
  return nb_predict(state_->stable, inputs).labels;
}

void PlModel::train_initial(const LabeledBatch& batch) {
  state_ = bpl_create_initial(n_classes_, theta_, batch);
  state_->reset_counter_when_stable_wins = reset_counter_when_stable_wins_;
}

void PlModel::apply_mechanism(int am_id, const LabeledBatch& batch) {
  if (!state_) untrained_error("bPL model");
  state_ = apply_bpl_am(*state_, am_id, batch);
}

void PlModel::apply_custom(const LabeledBatch& batch) {
  if (!state_) untrained_error("bPL model");
  state_ = bpl_custom_step(*state_, batch);
}

bool PlModel::equals(const Model& other) const {
  const auto* o = dynamic_cast<const PlModel*>(&other);
  if (!o || trained() != o->trained()) return false;
  return !trained() || *state_ == *o->state_;
}

const PairedLearnerState& PlModel::state() const {
  if (!state_) untrained_error("bPL model");
  return *state_;
}

}  // namespace adapt
