#include "adaptstream/dwm.hpp"

#include <algorithm>
#include <cmath>

namespace adapt {

DwmEnsemble dwm_create_initial(int n_classes, double eta, const LabeledBatch& batch) {
  if (n_classes < 2) throw ConfigError("bDWM requires at least two classes");
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("bDWM eta must be in (0, 1)");
  DwmEnsemble ensemble;
  ensemble.n_classes = n_classes;
  ensemble.eta = eta;
  ensemble.experts.push_back(nb_update(NaiveBayesState(n_classes), batch));
  ensemble.weights.push_back(1.0);
  ensemble.class_counts.assign(n_classes, 0.0);
  for (Eigen::Index r = 0; r < batch.rows(); ++r)
    ensemble.class_counts[static_cast<int>(batch.targets(r))] += 1.0;
  return ensemble;
}

VectorXd dwm_predict(const DwmEnsemble& ensemble, const MatrixXd& inputs) {
  if (ensemble.experts.empty()) throw ConfigError("bDWM ensemble has no experts");
  const Eigen::Index rows = inputs.rows();
  MatrixXd vote_mass = MatrixXd::Zero(rows, ensemble.n_classes);
  for (std::size_t e = 0; e < ensemble.experts.size(); ++e) {
    const VectorXd votes = nb_predict(ensemble.experts[e], inputs).labels;
    for (Eigen::Index r = 0; r < rows; ++r)
      vote_mass(r, static_cast<int>(votes(r))) += ensemble.weights[e];
  }
  VectorXd labels(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    int best = 0;
    for (int c = 1; c < ensemble.n_classes; ++c)
      if (vote_mass(r, c) > vote_mass(r, best)) best = c;
    labels(r) = best;
  }
  return labels;
}

std::vector<double> dwm_expert_accuracies(const DwmEnsemble& ensemble,
                                          const LabeledBatch& batch) {
  std::vector<double> acc(ensemble.experts.size(), 0.0);
  for (std::size_t e = 0; e < ensemble.experts.size(); ++e) {
    const VectorXd votes = nb_predict(ensemble.experts[e], batch.inputs).labels;
    double hits = 0.0;
    for (Eigen::Index r = 0; r < batch.rows(); ++r)
      if (votes(r) == batch.targets(r)) hits += 1.0;
    acc[e] = hits / static_cast<double>(batch.rows());
  }
  return acc;
}

namespace {

void update_all_experts(DwmEnsemble& ensemble, const LabeledBatch& batch) {
  for (auto& expert : ensemble.experts) expert = nb_update(expert, batch);
}

void reweight_and_prune(DwmEnsemble& ensemble, const LabeledBatch& batch) {
  const auto accuracies = dwm_expert_accuracies(ensemble, batch);
  double sum = 0.0;
  for (std::size_t e = 0; e < ensemble.weights.size(); ++e) {
    ensemble.weights[e] *= std::exp(accuracies[e]);
    sum += ensemble.weights[e];
  }
  for (auto& w : ensemble.weights) w /= sum;

  // Drop experts below eta but never the last one; survivors renormalize.
  std::vector<std::size_t> keep;
  for (std::size_t e = 0; e < ensemble.weights.size(); ++e)
    if (ensemble.weights[e] >= ensemble.eta) keep.push_back(e);
  if (keep.empty()) {
    std::size_t best = 0;
    for (std::size_t e = 1; e < ensemble.weights.size(); ++e)
      if (ensemble.weights[e] > ensemble.weights[best]) best = e;
    keep.push_back(best);
  }
  if (keep.size() != ensemble.experts.size()) {
    std::vector<NaiveBayesState> experts;
    std::vector<double> weights;
    for (std::size_t e : keep) {
      experts.push_back(std::move(ensemble.experts[e]));
      weights.push_back(ensemble.weights[e]);
    }
    ensemble.experts = std::move(experts);
    ensemble.weights = std::move(weights);
    double kept = 0.0;
    for (double w : ensemble.weights) kept += w;
    for (auto& w : ensemble.weights) w /= kept;
  }
}

void create_expert(DwmEnsemble& ensemble, const LabeledBatch& batch) {
  ensemble.experts.push_back(nb_update(NaiveBayesState(ensemble.n_classes), batch));
  ensemble.weights.push_back(1.0);  // raw; normalized only by the next DAM2
}

}  // namespace

DwmEnsemble apply_dwm_am(const DwmEnsemble& ensemble, int am, const LabeledBatch& batch) {
  DwmEnsemble out = ensemble;
  switch (am) {
    case kDam0:
      break;
    case kDam1:
      update_all_experts(out, batch);
      break;
    case kDam2:
      reweight_and_prune(out, batch);
      break;
    case kDam3:
      create_expert(out, batch);
      break;
    case kDam4:
      reweight_and_prune(out, batch);
      update_all_experts(out, batch);
      break;
    case kDam5:
      update_all_experts(out, batch);
      create_expert(out, batch);
      break;
    case kDam6:
      reweight_and_prune(out, batch);
      create_expert(out, batch);
      break;
    case kDam7:
      reweight_and_prune(out, batch);
      update_all_experts(out, batch);
      create_expert(out, batch);
      break;
    default:
      throw MechanismError("invalid bDWM mechanism id " + std::to_string(am));
  }
  return out;
}

DwmEnsemble dwm_custom_step(const DwmEnsemble& ensemble, const LabeledBatch& batch) {
  // Ensemble accuracy from the pre-adaptation prediction.
  const VectorXd pred = dwm_predict(ensemble, batch.inputs);
  double hits = 0.0;
  for (Eigen::Index r = 0; r < batch.rows(); ++r)
    if (pred(r) == batch.targets(r)) hits += 1.0;
  const double ensemble_accuracy = hits / static_cast<double>(batch.rows());

  // Baseline: predict the modal class of everything seen before this batch.
  int modal = 0;
  for (int c = 1; c < ensemble.n_classes; ++c)
    if (ensemble.class_counts[c] > ensemble.class_counts[modal]) modal = c;
  double modal_hits = 0.0;
  for (Eigen::Index r = 0; r < batch.rows(); ++r)
    if (static_cast<int>(batch.targets(r)) == modal) modal_hits += 1.0;
  const double baseline_accuracy = modal_hits / static_cast<double>(batch.rows());

  DwmEnsemble out = apply_dwm_am(ensemble, kDam1, batch);
  out = apply_dwm_am(out, kDam2, batch);
  if (ensemble_accuracy < baseline_accuracy) out = apply_dwm_am(out, kDam3, batch);

  for (Eigen::Index r = 0; r < batch.rows(); ++r)
    out.class_counts[static_cast<int>(batch.targets(r))] += 1.0;
  return out;
}

}  // namespace adapt
