#include "adaptstream/sable.hpp"

#include "adaptstream/stats_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adapt {

namespace {
constexpr double kLikelihoodFloor = 1e-12;
}

void SableParams::validate() const {
  if (sigma <= 0.0) throw ConfigError("sable sigma must be positive");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("sable lambda must be in (0, 1]");
  if (std::abs(delta0 + delta1 - 1.0) > 1e-12)
    throw ConfigError("sable descriptor weights must satisfy delta0 + delta1 = 1");
  if (delta0 < 0.0 || delta1 < 0.0) throw ConfigError("sable descriptor weights must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("sable alpha must be in (0, 1)");
  if (latents < 1) throw ConfigError("sable latent count must be >= 1");
  if (resolution < 2) throw ConfigError("sable descriptor resolution must be >= 2");
  if (bound <= 0.0) throw ConfigError("sable descriptor bound must be positive");
}

DescriptorGrid::DescriptorGrid(int resolution, double bound)
    : resolution_(resolution), bound_(bound), cells_(MatrixXd::Zero(resolution, resolution)) {}

double DescriptorGrid::sample(double x, double y) const {
  const double cell = cell_size();
  auto locate = [&](double v, int& lo, double& frac) {
    double t = (v + bound_) / cell - 0.5;  // continuous index in cell-center units
    if (t <= 0.0) {
      lo = 0;
      frac = 0.0;
    } else if (t >= resolution_ - 1) {
      lo = resolution_ - 2;
      frac = 1.0;
    } else {
      lo = static_cast<int>(t);
      frac = t - lo;
    }
  };
  int ix, iy;
  double fx, fy;
  locate(x, ix, fx);
  locate(y, iy, fy);
  const double v00 = cells_(ix, iy);
  const double v10 = cells_(ix + 1, iy);
  const double v01 = cells_(ix, iy + 1);
  const double v11 = cells_(ix + 1, iy + 1);
  return v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) + v01 * (1 - fx) * fy + v11 * fx * fy;
}

double DescriptorGrid::mass() const {
  const double area = cell_size() * cell_size();
  return cells_.sum() * area;
}

bool SableEnsemble::operator==(const SableEnsemble& other) const {
  return experts == other.experts && target_scale == other.target_scale &&
         feature_scale.size() == other.feature_scale.size() &&
         (feature_scale.size() == 0 ||
          (feature_scale.array() == other.feature_scale.array()).all());
}

namespace {

VectorXd frozen_scale(const MatrixXd& values) {
  const Eigen::Index n = values.rows();
  VectorXd scale(values.cols());
  for (Eigen::Index m = 0; m < values.cols(); ++m) {
    const double mean = values.col(m).mean();
    const double var = (values.col(m).array() - mean).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    scale(m) = sd > 1e-12 ? sd : 1.0;
  }
  return scale;
}

SableExpert make_expert(const SableParams& params, const LabeledBatch& batch,
                        const VectorXd& feature_scale, double target_scale) {
  SableExpert expert;
  expert.created_at = batch.index;
  expert.rpls = rpls_update(RplsState(params.latents, params.lambda), batch, 1.0);
  expert.descriptors = build_descriptors(expert, batch, feature_scale, target_scale, params);
  return expert;
}

MatrixXd expert_predictions(const SableEnsemble& ensemble, const MatrixXd& inputs) {
  MatrixXd preds(inputs.rows(), static_cast<Eigen::Index>(ensemble.experts.size()));
  for (std::size_t e = 0; e < ensemble.experts.size(); ++e) {
    preds.col(static_cast<Eigen::Index>(e)) =
        rpls_predict(ensemble.experts[e].rpls, inputs).values;
  }
  return preds;
}

}  // namespace

SableEnsemble sable_create_initial(const SableParams& params, const LabeledBatch& batch) {
  params.validate();
  validate_batch(batch, TaskKind::regression, 0);
  SableEnsemble ensemble;
  ensemble.params = params;
  ensemble.feature_scale = frozen_scale(batch.inputs);
  const double mean_y = batch.targets.mean();
  const double var_y =
      (batch.targets.array() - mean_y).square().sum() / static_cast<double>(batch.rows());
  ensemble.target_scale = std::sqrt(var_y) > 1e-12 ? std::sqrt(var_y) : 1.0;
  ensemble.experts.push_back(
      make_expert(params, batch, ensemble.feature_scale, ensemble.target_scale));
  return ensemble;
}

std::vector<DescriptorGrid> build_descriptors(const SableExpert& expert,
                                              const LabeledBatch& batch,
                                              const VectorXd& feature_scale, double target_scale,
                                              const SableParams& params) {
  if (params.sigma <= 0.0) throw ConfigError("descriptor kernel width must be positive");
  if (batch.cols() != feature_scale.size())
    throw DimensionError("descriptor feature scale mismatch");

  const int res = params.resolution;
  const double sigma2 = params.sigma * params.sigma;
  const double peak = 1.0 / (2.0 * M_PI * sigma2);
  const VectorXd yhat = rpls_predict(expert.rpls, batch.inputs).values;
  const double inv_count = 1.0 / static_cast<double>(batch.rows());

  std::vector<DescriptorGrid> grids;
  grids.reserve(static_cast<std::size_t>(batch.cols()));
  VectorXd gx(res), gy(res);
  for (Eigen::Index m = 0; m < batch.cols(); ++m) {
    DescriptorGrid grid(res, params.bound);
    for (Eigen::Index j = 0; j < batch.rows(); ++j) {
      const double err = yhat(j) - batch.targets(j);
      const double w = std::exp(-err * err);
      const double u = batch.inputs(j, m) / feature_scale(m);
      const double v = batch.targets(j) / target_scale;
      // The isotropic kernel factorizes, so accumulate an outer product.
      for (int i = 0; i < res; ++i) {
        const double dx = grid.center(i) - u;
        gx(i) = std::exp(-dx * dx / (2.0 * sigma2));
        const double dy = grid.center(i) - v;
        gy(i) = std::exp(-dy * dy / (2.0 * sigma2));
      }
      grid.cells() += (w * peak * inv_count) * (gx * gy.transpose());
    }
    grids.push_back(std::move(grid));
  }
  return grids;
}

DescriptorGrid merge_descriptors(const DescriptorGrid& old_grid, const DescriptorGrid& new_grid,
                                 double delta0, double delta1) {
  if (!old_grid.same_geometry(new_grid))
    throw DimensionError("descriptor grids have different geometry");
  DescriptorGrid out = old_grid;
  out.cells() = delta0 * old_grid.cells() + delta1 * new_grid.cells();
  return out;
}

SablePrediction sable_predict(const SableEnsemble& ensemble, const MatrixXd& inputs) {
  if (ensemble.experts.empty()) throw ConfigError("sable ensemble has no experts");
  if (inputs.cols() != ensemble.feature_scale.size())
    throw DimensionError("sable predict feature count mismatch");

  const Eigen::Index rows = inputs.rows();
  const auto n_experts = static_cast<Eigen::Index>(ensemble.experts.size());
  const MatrixXd preds = expert_predictions(ensemble, inputs);

  SablePrediction out;
  out.predictions = VectorXd::Zero(rows);
  out.expert_weights = MatrixXd::Zero(rows, n_experts);

  VectorXd log_lik(n_experts);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index e = 0; e < n_experts; ++e) {
      const SableExpert& expert = ensemble.experts[static_cast<std::size_t>(e)];
      const double v = preds(r, e) / ensemble.target_scale;
      double acc = 0.0;
      for (Eigen::Index m = 0; m < inputs.cols(); ++m) {
        const double u = inputs(r, m) / ensemble.feature_scale(m);
        const double density = expert.descriptors[static_cast<std::size_t>(m)].sample(u, v);
        acc += std::log(std::max(density, kLikelihoodFloor));
      }
      log_lik(e) = acc;  // uniform expert prior cancels in the normalization
    }
    const double top = log_lik.maxCoeff();
    VectorXd weights = (log_lik.array() - top).exp();
    weights /= weights.sum();
    out.expert_weights.row(r) = weights.transpose();
    out.predictions(r) = weights.dot(preds.row(r).transpose());
  }
  return out;
}

std::vector<std::vector<Eigen::Index>> partition_by_best_expert(const SableEnsemble& ensemble,
                                                                const LabeledBatch& batch) {
  const MatrixXd preds = expert_predictions(ensemble, batch.inputs);
  std::vector<std::vector<Eigen::Index>> assignment(ensemble.experts.size());
  for (Eigen::Index r = 0; r < batch.rows(); ++r) {
    Eigen::Index best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (Eigen::Index e = 0; e < preds.cols(); ++e) {
      const double err = std::abs(preds(r, e) - batch.targets(r));
      if (err < best_err) {
        best_err = err;
        best = e;
      }
    }
    assignment[static_cast<std::size_t>(best)].push_back(r);
  }
  return assignment;
}

namespace {

/// Rebuild an expert's descriptors from the given rows and fold them in with
/// the configured (delta0, delta1) weights.
void refresh_descriptors(SableExpert& expert, const LabeledBatch& batch,
                         const SableEnsemble& ensemble) {
  const auto fresh =
      build_descriptors(expert, batch, ensemble.feature_scale, ensemble.target_scale,
                        ensemble.params);
  for (std::size_t m = 0; m < fresh.size(); ++m) {
    expert.descriptors[m] = merge_descriptors(expert.descriptors[m], fresh[m],
                                              ensemble.params.delta0, ensemble.params.delta1);
  }
}

SableEnsemble batch_learning(const SableEnsemble& ensemble, const LabeledBatch& batch,
                             double lambda) {
  SableEnsemble out = ensemble;
  const auto assignment = partition_by_best_expert(out, batch);
  for (std::size_t e = 0; e < out.experts.size(); ++e) {
    if (assignment[e].empty()) continue;
    const LabeledBatch sub = take_rows(batch, assignment[e]);
    out.experts[e].rpls = rpls_update(out.experts[e].rpls, sub, lambda);
    refresh_descriptors(out.experts[e], sub, out);
  }
  return out;
}

}  // namespace

SableEnsemble apply_sable_am(const SableEnsemble& ensemble, int am, const LabeledBatch& batch) {
  switch (am) {
    case kSam0:
      return ensemble;
    case kSam1:
      return batch_learning(ensemble, batch, 1.0);
    case kSam2:
      return batch_learning(ensemble, batch, ensemble.params.lambda);
    case kSam3: {
      SableEnsemble out = ensemble;
      for (auto& expert : out.experts) refresh_descriptors(expert, batch, out);
      return out;
    }
    case kSam4: {
      SableEnsemble out = ensemble;
      out.experts.push_back(
          make_expert(out.params, batch, out.feature_scale, out.target_scale));
      if (out.experts.size() > 1) {
        out = prune_and_merge_experts(out, batch, out.params.alpha);
      }
      for (auto& expert : out.experts) refresh_descriptors(expert, batch, out);
      return out;
    }
    default:
      throw MechanismError("invalid SABLE mechanism id " + std::to_string(am));
  }
}

SableEnsemble prune_and_merge_experts(const SableEnsemble& ensemble, const LabeledBatch& batch,
                                      double alpha) {
  if (ensemble.experts.size() < 2) throw ConfigError("pruning needs at least two experts");
  if (batch.rows() < 2) {
    warn("skipping expert pruning: batch has fewer than two rows");
    return ensemble;
  }

  SableEnsemble out = ensemble;
  const Eigen::Index n = batch.rows();
  std::vector<double> means, vars;
  {
    const MatrixXd preds = expert_predictions(out, batch.inputs);
    for (Eigen::Index e = 0; e < preds.cols(); ++e) {
      const double mean = preds.col(e).mean();
      means.push_back(mean);
      vars.push_back((preds.col(e).array() - mean).square().sum() / static_cast<double>(n - 1));
    }
  }

  auto p_value = [&](std::size_t i, std::size_t j) {
    return two_sample_t_p_value(static_cast<double>(n), means[i], vars[i],
                                static_cast<double>(n), means[j], vars[j],
                                out.params.welch_ttest);
  };

  while (out.experts.size() > 1) {
    double max_p = -1.0;
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = 0; i + 1 < out.experts.size(); ++i) {
      for (std::size_t j = i + 1; j < out.experts.size(); ++j) {
        const double p = p_value(i, j);
        if (p > max_p) {
          max_p = p;
          pi = i;
          pj = j;
        }
      }
    }
    if (max_p <= alpha) break;

    // Remove the older expert, folding its descriptor grids into the survivor.
    std::size_t doomed = pi, survivor = pj;
    if (out.experts[pj].created_at < out.experts[pi].created_at) {
      doomed = pj;
      survivor = pi;
    }
    for (std::size_t m = 0; m < out.experts[survivor].descriptors.size(); ++m) {
      out.experts[survivor].descriptors[m].cells() += out.experts[doomed].descriptors[m].cells();
    }
    out.experts.erase(out.experts.begin() + static_cast<std::ptrdiff_t>(doomed));
    means.erase(means.begin() + static_cast<std::ptrdiff_t>(doomed));
    vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(doomed));
  }
  return out;
}

}  // namespace adapt
