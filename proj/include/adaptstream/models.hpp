#pragma once

// Model adapters wiring the three algorithms into the strategy framework.

#include "adaptstream/dwm.hpp"
#include "adaptstream/model.hpp"
#include "adaptstream/paired_learner.hpp"
#include "adaptstream/sable.hpp"

#include <memory>
#include <optional>

namespace adapt {

class SableModel final : public Model {
 public:
  explicit SableModel(SableParams params) : params_(params) { params_.validate(); }

  std::unique_ptr<Model> clone() const override { return std::make_unique<SableModel>(*this); }
  TaskKind task() const override { return TaskKind::regression; }
  std::string algorithm() const override { return "sable"; }
  bool trained() const override { return ensemble_.has_value(); }
  Eigen::Index n_features() const override {
    return trained() ? ensemble_->feature_scale.size() : 0;
  }
  std::vector<int> mechanism_ids() const override { return {kSam0, kSam1, kSam2, kSam3, kSam4}; }
  VectorXd predict(const MatrixXd& inputs) const override;
  void train_initial(const LabeledBatch& batch) override;
  void apply_mechanism(int am_id, const LabeledBatch& batch) override;
  std::vector<int> joint_sequence() const override { return {kSam2, kSam4}; }
  bool equals(const Model& other) const override;

  const SableEnsemble& ensemble() const;

 private:
  SableParams params_;
  std::optional<SableEnsemble> ensemble_;
};

class DwmModel final : public Model {
 public:
  DwmModel(int n_classes, double eta) : n_classes_(n_classes), eta_(eta) {}

  std::unique_ptr<Model> clone() const override { return std::make_unique<DwmModel>(*this); }
  TaskKind task() const override { return TaskKind::classification; }
  std::string algorithm() const override { return "bdwm"; }
  bool trained() const override { return ensemble_.has_value(); }
  Eigen::Index n_features() const override {
    return trained() ? ensemble_->experts.front().n_features() : 0;
  }
  std::vector<int> mechanism_ids() const override {
    return {kDam0, kDam1, kDam2, kDam3, kDam4, kDam5, kDam6, kDam7};
  }
  VectorXd predict(const MatrixXd& inputs) const override;
  void train_initial(const LabeledBatch& batch) override;
  void apply_mechanism(int am_id, const LabeledBatch& batch) override;
  std::vector<int> joint_sequence() const override { return {kDam7}; }
  bool has_custom_strategy() const override { return true; }
  void apply_custom(const LabeledBatch& batch) override;
  bool equals(const Model& other) const override;

  const DwmEnsemble& ensemble() const;

 private:
  int n_classes_;
  double eta_;
  std::optional<DwmEnsemble> ensemble_;
};

class PlModel final : public Model {
 public:
  PlModel(int n_classes, int theta, bool reset_counter_when_stable_wins = false)
      : n_classes_(n_classes),
        theta_(theta),
        reset_counter_when_stable_wins_(reset_counter_when_stable_wins) {}

  std::unique_ptr<Model> clone() const override { return std::make_unique<PlModel>(*this); }
  TaskKind task() const override { return TaskKind::classification; }
  std::string algorithm() const override { return "bpl"; }
  bool trained() const override { return state_.has_value(); }
  Eigen::Index n_features() const override {
    return trained() ? state_->stable.n_features() : 0;
  }
  std::vector<int> mechanism_ids() const override { return {kPam0, kPam1, kPam2}; }
  VectorXd predict(const MatrixXd& inputs) const override;
  void train_initial(const LabeledBatch& batch) override;
  void apply_mechanism(int am_id, const LabeledBatch& batch) override;
  bool has_custom_strategy() const override { return true; }
  void apply_custom(const LabeledBatch& batch) override;
  bool equals(const Model& other) const override;

  const PairedLearnerState& state() const;

 private:
  int n_classes_;
  int theta_;
  bool reset_counter_when_stable_wins_;
  std::optional<PairedLearnerState> state_;
};

}  // namespace adapt
