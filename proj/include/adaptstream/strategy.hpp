#pragma once

// Generic adaptation strategies over any Model: fixed sequences, Joint,
// algorithm custom steps, cross-validatory selection, retrospective
// correction, and the lookahead Oracle benchmark.

#include "adaptstream/evaluation.hpp"
#include "adaptstream/model.hpp"

#include <deque>
#include <functional>
#include <optional>
#include <vector>

namespace adapt {

enum class StrategyKind { sequence, joint, custom, xv_select, oracle };

struct StrategySpec {
  StrategyKind kind = StrategyKind::sequence;
  int sequence_am = 0;  // AM deployed every batch when kind == sequence
  int q_folds = 10;
  int r_steps = 1;
  bool rc_enabled = false;
  /// Alternative retrospective-correction wiring: predictions come from the
  /// uncorrected lineage while corrections only steer the propagated state.
  bool predict_from_uncorrected = false;
};

struct PredictOutcome {
  VectorXd predictions;
  bool cold_start = false;
};

/// Predictions from the a-priori state; the state is never modified. An
/// untrained model yields the task default (0.0 / class 0) and a cold flag.
PredictOutcome predict_batch(const PredictorState& state, const MatrixXd& inputs);

/// f+ = f- composed with the mechanism; returns a new state with the lineage
/// extended, leaving the input untouched.
PredictorState deploy_am(const PredictorState& state, const AdaptiveMechanism& am,
                         const LabeledBatch& batch);

struct Selection {
  int am_id = 0;
  PredictorState state;
};

/// Benchmark selection: deploy every candidate on `current` and keep the one
/// with the lowest plain loss on `next`. Ties go to the earliest candidate.
Selection oracle_select(const PredictorState& state, const std::vector<AdaptiveMechanism>& ams,
                        const LabeledBatch& current, const LabeledBatch& next);

/// q-fold cross-validatory selection on the current batch. Folds are assigned
/// round-robin by row index; for each candidate the model is adapted on the
/// q-1 training folds and scored on the held-out fold, and the candidate with
/// the lowest mean fold loss is deployed on the full batch. When the batch
/// has fewer than q rows the fold count falls back to leave-one-out.
Selection xv_select(const PredictorState& state, const std::vector<AdaptiveMechanism>& ams,
                    const LabeledBatch& batch, int q_folds);

/// History needed to retrospectively rebuild the model: the state each
/// adaptation was applied to, the batch it consumed, and the chosen id.
class SnapshotRing {
 public:
  explicit SnapshotRing(int capacity);

  void push(PredictorState pre_state, LabeledBatch batch, int deployed_am);
  std::size_t size() const { return entries_.size(); }
  int capacity() const { return capacity_; }

  const PredictorState& pre_state(std::size_t i) const { return entries_[i].pre_state; }
  const LabeledBatch& batch(std::size_t i) const { return entries_[i].batch; }
  int deployed_am(std::size_t i) const { return entries_[i].deployed_am; }

 private:
  struct Entry {
    PredictorState pre_state;
    LabeledBatch batch;
    int deployed_am;
  };
  int capacity_;
  std::deque<Entry> entries_;
};

struct RcResult {
  std::optional<PredictorState> state;  // empty when not enough history
  std::vector<int> sequence;            // chosen replacement ids, oldest first
  long candidates_evaluated = 0;
};

/// r-step retrospective correction: enumerate every length-r id sequence over
/// the candidate set, replay it from the state stored r steps back, score the
/// rebuilt model on the newly observed batch, and return the arg-min rebuild
/// (plain loss, no CV). Ties resolve to the lexicographically smallest
/// sequence of ids. With fewer than r prior steps no correction is made.
RcResult retrospective_correct(const SnapshotRing& ring,
                               const std::vector<AdaptiveMechanism>& ams,
                               const LabeledBatch& current_batch, int r_steps);

struct BatchRecord {
  int batch_index = 0;
  double loss = 0.0;
  int chosen_am = 0;  // kCustomStep / kJointStep for composite steps
  bool cold_start = false;
  double wall_ms = 0.0;
};

/// Optional capture of the propagation state right before each adaptation,
/// for offline replay checks.
struct RunTrace {
  std::vector<int> batch_indices;
  std::vector<PredictorState> pre_adapt_states;
};

/// Per-batch evaluation data; when absent, batches score prequentially on
/// their own rows.
struct EvaluationSets {
  std::vector<MatrixXd> inputs;
  std::vector<VectorXd> targets;
};

/// Prequential run: the first batch trains the initial model, every later
/// batch is scored with the a-priori state and then consumed by the strategy.
/// The Oracle strategy reads one batch ahead for selection and therefore
/// treats the final batch as lookahead material only.
std::vector<BatchRecord> run_strategy(PredictorState initial,
                                      const std::vector<LabeledBatch>& stream,
                                      const StrategySpec& spec,
                                      const std::vector<AdaptiveMechanism>& ams,
                                      const EvaluationSets* eval_sets = nullptr,
                                      RunTrace* trace = nullptr);

/// The algorithm's full mechanism set as AdaptiveMechanism values.
std::vector<AdaptiveMechanism> mechanism_set(const Model& model);

}  // namespace adapt
