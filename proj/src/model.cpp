#include "adaptstream/model.hpp"

namespace adapt {

void Model::apply_custom(const LabeledBatch&) {
  throw MechanismError(algorithm() + " has no custom adaptation strategy");
}

PredictorState::PredictorState(std::unique_ptr<Model> model) : model_(std::move(model)) {
  if (!model_) throw ConfigError("PredictorState requires a model");
}

PredictorState::PredictorState(const PredictorState& other)
    : model_(other.model_->clone()), lineage_(other.lineage_) {}

PredictorState& PredictorState::operator=(const PredictorState& other) {
  if (this != &other) {
    model_ = other.model_->clone();
    lineage_ = other.lineage_;
  }
  return *this;
}

}  // namespace adapt
