#include "adaptstream/strategy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace adapt {

namespace {

bool valid_mechanism(const Model& model, int am_id) {
  const auto ids = model.mechanism_ids();
  return std::find(ids.begin(), ids.end(), am_id) != ids.end();
}

double plain_loss(const PredictorState& state, const MatrixXd& inputs, const VectorXd& targets) {
  return score_batch(predict_batch(state, inputs).predictions, targets, state.model().task());
}

}  // namespace

PredictOutcome predict_batch(const PredictorState& state, const MatrixXd& inputs) {
  PredictOutcome out;
  const Model& model = state.model();
  if (!model.trained()) {
    out.predictions = VectorXd::Zero(inputs.rows());
    out.cold_start = true;
    return out;
  }
  if (inputs.cols() != model.n_features())
    throw DimensionError("predict_batch feature count mismatch");
  out.predictions = model.predict(inputs);
  return out;
}

PredictorState deploy_am(const PredictorState& state, const AdaptiveMechanism& am,
                         const LabeledBatch& batch) {
  if (!valid_mechanism(state.model(), am.id))
    throw MechanismError("mechanism id " + std::to_string(am.id) + " is not valid for " +
                         state.model().algorithm());
  PredictorState next = state;
  next.model().apply_mechanism(am.id, batch);
  next.append_lineage(am.id);
  return next;
}

Selection oracle_select(const PredictorState& state, const std::vector<AdaptiveMechanism>& ams,
                        const LabeledBatch& current, const LabeledBatch& next) {
  if (ams.empty()) throw ConfigError("oracle_select requires a nonempty mechanism list");
  std::optional<Selection> best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (const auto& am : ams) {
    PredictorState candidate = deploy_am(state, am, current);
    const double loss = plain_loss(candidate, next.inputs, next.targets);
    if (!best || loss < best_loss) {
      best_loss = loss;
      best = Selection{am.id, std::move(candidate)};
    }
  }
  return std::move(*best);
}

Selection xv_select(const PredictorState& state, const std::vector<AdaptiveMechanism>& ams,
                    const LabeledBatch& batch, int q_folds) {
  if (ams.empty()) throw ConfigError("xv_select requires a nonempty mechanism list");
  if (q_folds < 2) throw ConfigError("xv_select requires q >= 2");
  int q = q_folds;
  if (batch.rows() < q) {
    q = static_cast<int>(batch.rows());
    warn("xv_select: batch smaller than q, falling back to leave-one-out with q = " +
         std::to_string(q));
    if (q < 2) throw ConfigError("xv_select requires at least two rows");
  }

  // Round-robin fold assignment: row i belongs to fold i mod q.
  std::vector<std::vector<Eigen::Index>> fold_rows(static_cast<std::size_t>(q));
  for (Eigen::Index r = 0; r < batch.rows(); ++r)
    fold_rows[static_cast<std::size_t>(r % q)].push_back(r);

  std::vector<LabeledBatch> train_parts, test_parts;
  for (int f = 0; f < q; ++f) {
    std::vector<Eigen::Index> train_idx;
    for (Eigen::Index r = 0; r < batch.rows(); ++r)
      if (static_cast<int>(r % q) != f) train_idx.push_back(r);
    train_parts.push_back(take_rows(batch, train_idx));
    test_parts.push_back(take_rows(batch, fold_rows[static_cast<std::size_t>(f)]));
  }

  int best_am = ams.front().id;
  double best_loss = std::numeric_limits<double>::infinity();
  bool first = true;
  for (const auto& am : ams) {
    double total = 0.0;
    for (int f = 0; f < q; ++f) {
      PredictorState candidate = deploy_am(state, am, train_parts[static_cast<std::size_t>(f)]);
      total += plain_loss(candidate, test_parts[static_cast<std::size_t>(f)].inputs,
                          test_parts[static_cast<std::size_t>(f)].targets);
    }
    const double mean_loss = total / static_cast<double>(q);
    if (first || mean_loss < best_loss) {
      best_loss = mean_loss;
      best_am = am.id;
      first = false;
    }
  }
  return Selection{best_am, deploy_am(state, AdaptiveMechanism{best_am, {}}, batch)};
}

SnapshotRing::SnapshotRing(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw ConfigError("snapshot ring capacity must be >= 1");
}

void SnapshotRing::push(PredictorState pre_state, LabeledBatch batch, int deployed_am) {
  entries_.push_back(Entry{std::move(pre_state), std::move(batch), deployed_am});
  while (entries_.size() > static_cast<std::size_t>(capacity_)) entries_.pop_front();
}

RcResult retrospective_correct(const SnapshotRing& ring,
                               const std::vector<AdaptiveMechanism>& ams,
                               const LabeledBatch& current_batch, int r_steps) {
  if (r_steps < 1) throw ConfigError("retrospective correction requires r >= 1");
  if (r_steps > ring.capacity()) throw ConfigError("r exceeds the snapshot ring capacity");
  if (ams.empty()) throw ConfigError("retrospective correction requires mechanisms");

  RcResult result;
  if (ring.size() < static_cast<std::size_t>(r_steps)) return result;  // not enough history

  // Candidates are enumerated in ascending id order so the first strict
  // improvement is also the lexicographically smallest tied sequence.
  std::vector<AdaptiveMechanism> ordered = ams;
  std::sort(ordered.begin(), ordered.end(),
            [](const AdaptiveMechanism& a, const AdaptiveMechanism& b) { return a.id < b.id; });

  const std::size_t start = ring.size() - static_cast<std::size_t>(r_steps);
  const std::size_t h = ordered.size();
  std::vector<std::size_t> digits(static_cast<std::size_t>(r_steps), 0);
  double best_loss = std::numeric_limits<double>::infinity();

  while (true) {
    PredictorState rebuilt = ring.pre_state(start);
    std::vector<int> sequence;
    for (int step = 0; step < r_steps; ++step) {
      const auto& am = ordered[digits[static_cast<std::size_t>(step)]];
      rebuilt = deploy_am(rebuilt, am, ring.batch(start + static_cast<std::size_t>(step)));
      sequence.push_back(am.id);
    }
    const double loss = plain_loss(rebuilt, current_batch.inputs, current_batch.targets);
    ++result.candidates_evaluated;
    if (!result.state || loss < best_loss) {
      best_loss = loss;
      result.state = std::move(rebuilt);
      result.sequence = std::move(sequence);
    }

    // Advance the odometer; the last step is the least significant digit.
    int pos = r_steps - 1;
    while (pos >= 0) {
      if (++digits[static_cast<std::size_t>(pos)] < h) break;
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return result;
}

std::vector<AdaptiveMechanism> mechanism_set(const Model& model) {
  std::vector<AdaptiveMechanism> ams;
  for (int id : model.mechanism_ids()) ams.push_back(AdaptiveMechanism{id, {}});
  return ams;
}

std::vector<BatchRecord> run_strategy(PredictorState initial,
                                      const std::vector<LabeledBatch>& stream,
                                      const StrategySpec& spec,
                                      const std::vector<AdaptiveMechanism>& ams,
                                      const EvaluationSets* eval_sets, RunTrace* trace) {
  if (stream.size() < 2) throw ConfigError("run_strategy requires at least two batches");
  if (spec.kind == StrategyKind::xv_select && ams.empty())
    throw ConfigError("XVSelect requires a mechanism list");
  if (spec.rc_enabled && ams.empty())
    throw ConfigError("retrospective correction requires a mechanism list");
  if (eval_sets && eval_sets->inputs.size() != stream.size())
    throw DimensionError("evaluation sets must align with the stream");

  using Clock = std::chrono::steady_clock;
  std::vector<BatchRecord> records;

  PredictorState propagation = std::move(initial);
  propagation.model().train_initial(stream.front());
  // Separate prediction lineage, used only under the alternative RC wiring.
  std::optional<PredictorState> prediction_state;
  if (spec.rc_enabled && spec.predict_from_uncorrected) prediction_state = propagation;

  SnapshotRing ring(std::max(spec.r_steps, 1));

  const std::size_t last = stream.size() - 1;
  const bool oracle = spec.kind == StrategyKind::oracle;
  // Under Oracle the final batch only serves as the selection target.
  const std::size_t end = oracle ? last : stream.size();

  for (std::size_t k = 1; k < end; ++k) {
    const LabeledBatch& batch = stream[k];
    const auto t0 = Clock::now();

    BatchRecord record;
    record.batch_index = batch.index;
    const PredictorState& for_prediction = prediction_state ? *prediction_state : propagation;
    if (eval_sets) {
      const auto outcome = predict_batch(for_prediction, eval_sets->inputs[k]);
      record.loss = score_batch(outcome.predictions, eval_sets->targets[k],
                                for_prediction.model().task());
      record.cold_start = outcome.cold_start;
    } else {
      const auto outcome = predict_batch(for_prediction, batch.inputs);
      record.loss =
          score_batch(outcome.predictions, batch.targets, for_prediction.model().task());
      record.cold_start = outcome.cold_start;
    }

    // Labels of batch k are now available: correct retrospectively first,
    // then let the strategy choose the mechanism for this batch.
    if (spec.rc_enabled) {
      const auto rc = retrospective_correct(ring, ams, batch, spec.r_steps);
      if (rc.state) propagation = *rc.state;
    }

    if (trace) {
      trace->batch_indices.push_back(batch.index);
      trace->pre_adapt_states.push_back(propagation);
    }

    int chosen = 0;
    switch (spec.kind) {
      case StrategyKind::sequence: {
        chosen = spec.sequence_am;
        ring.push(propagation, batch, chosen);
        propagation = deploy_am(propagation, AdaptiveMechanism{chosen, {}}, batch);
        break;
      }
      case StrategyKind::joint: {
        const auto sequence = propagation.model().joint_sequence();
        if (sequence.empty())
          throw ConfigError(propagation.model().algorithm() +
                            " does not support the Joint strategy");
        chosen = kJointStep;
        ring.push(propagation, batch, chosen);
        for (int id : sequence)
          propagation = deploy_am(propagation, AdaptiveMechanism{id, {}}, batch);
        break;
      }
      case StrategyKind::custom: {
        if (!propagation.model().has_custom_strategy())
          throw ConfigError(propagation.model().algorithm() +
                            " does not provide a custom strategy");
        chosen = kCustomStep;
        ring.push(propagation, batch, chosen);
        propagation.model().apply_custom(batch);
        propagation.append_lineage(kCustomStep);
        break;
      }
      case StrategyKind::xv_select: {
        auto selection = xv_select(propagation, ams, batch, spec.q_folds);
        chosen = selection.am_id;
        ring.push(std::move(propagation), batch, chosen);
        propagation = std::move(selection.state);
        break;
      }
      case StrategyKind::oracle: {
        auto selection = oracle_select(propagation, ams, batch, stream[k + 1]);
        chosen = selection.am_id;
        ring.push(std::move(propagation), batch, chosen);
        propagation = std::move(selection.state);
        break;
      }
    }

    if (prediction_state) {
      // Alternative wiring: replay only the chosen step on the uncorrected
      // lineage; composite steps replay through the same entry points.
      if (spec.kind == StrategyKind::custom) {
        prediction_state->model().apply_custom(batch);
        prediction_state->append_lineage(kCustomStep);
      } else if (spec.kind == StrategyKind::joint) {
        for (int id : prediction_state->model().joint_sequence())
          *prediction_state = deploy_am(*prediction_state, AdaptiveMechanism{id, {}}, batch);
      } else {
        *prediction_state = deploy_am(*prediction_state, AdaptiveMechanism{chosen, {}}, batch);
      }
    }

    record.chosen_am = chosen;
    record.wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace adapt
