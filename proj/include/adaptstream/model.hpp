#pragma once

// Framework view of an adaptive model: an opaque payload that can be cloned,
// asked to predict, and advanced by one of its adaptive mechanisms. Every
// algorithm exposes a mechanism set G that contains exactly one no-op member.

#include "adaptstream/common.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace adapt {

struct AdaptiveMechanism {
  int id = 0;
  std::map<std::string, double> params;  // mechanism-level parameters, usually empty
};

class Model {
 public:
  virtual ~Model() = default;

  virtual std::unique_ptr<Model> clone() const = 0;
  virtual TaskKind task() const = 0;
  virtual std::string algorithm() const = 0;
  virtual bool trained() const = 0;
  virtual Eigen::Index n_features() const = 0;  // 0 while untrained

  /// Valid mechanism ids, ascending; the first entry is the no-op.
  virtual std::vector<int> mechanism_ids() const = 0;
  virtual int noop_id() const { return 0; }

  virtual VectorXd predict(const MatrixXd& inputs) const = 0;

  /// Consumes the first batch of a stream (the creation path, not an AM).
  virtual void train_initial(const LabeledBatch& batch) = 0;
  virtual void apply_mechanism(int am_id, const LabeledBatch& batch) = 0;

  /// Mechanism ids the Joint strategy deploys in order; empty if unsupported.
  virtual std::vector<int> joint_sequence() const { return {}; }

  virtual bool has_custom_strategy() const { return false; }
  virtual void apply_custom(const LabeledBatch& batch);

  /// Exact state comparison (used for determinism and replay checks).
  virtual bool equals(const Model& other) const = 0;
};

/// Value-semantic snapshot of a model plus the ids of the mechanisms applied
/// so far. Copying clones the payload, so a copied state can be adapted
/// without disturbing the original.
class PredictorState {
 public:
  explicit PredictorState(std::unique_ptr<Model> model);
  PredictorState(const PredictorState& other);
  PredictorState& operator=(const PredictorState& other);
  PredictorState(PredictorState&&) noexcept = default;
  PredictorState& operator=(PredictorState&&) noexcept = default;

  const Model& model() const { return *model_; }
  Model& model() { return *model_; }

  const std::vector<int>& lineage() const { return lineage_; }
  void append_lineage(int am_id) { lineage_.push_back(am_id); }

 private:
  std::unique_ptr<Model> model_;
  std::vector<int> lineage_;
};

/// Sentinel lineage ids for steps that are not a single AM from G.
inline constexpr int kCustomStep = -1;
inline constexpr int kJointStep = -2;

}  // namespace adapt
