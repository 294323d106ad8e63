#include "adaptstream/rpls.hpp"

#include <cmath>
#include <vector>

namespace adapt {

RplsState::RplsState(int latents, double lambda) : latents_(latents), lambda_(lambda) {
  if (latents < 1) throw ConfigError("RPLS latent count must be >= 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("RPLS lambda must be in (0, 1]");
}

bool RplsState::operator==(const RplsState& other) const {
  auto vec_eq = [](const VectorXd& a, const VectorXd& b) {
    return a.size() == b.size() && (a.size() == 0 || (a.array() == b.array()).all());
  };
  return latents_ == other.latents_ && lambda_ == other.lambda_ && weight_ == other.weight_ &&
         sum_y_ == other.sum_y_ && mean_y_ == other.mean_y_ && vec_eq(sum_x_, other.sum_x_) &&
         vec_eq(sum_xy_, other.sum_xy_) && vec_eq(mean_x_, other.mean_x_) &&
         vec_eq(coef_, other.coef_) && sum_xx_.rows() == other.sum_xx_.rows() &&
         (sum_xx_.size() == 0 || (sum_xx_.array() == other.sum_xx_.array()).all());
}

void RplsState::refit() {
  const Eigen::Index m = sum_x_.size();
  mean_x_ = sum_x_ / weight_;
  mean_y_ = sum_y_ / weight_;
  MatrixXd s_xx = sum_xx_ - sum_x_ * mean_x_.transpose();
  VectorXd s_xy = sum_xy_ - sum_x_ * mean_y_;

  // Kernel PLS on the covariance form: only X'y is deflated, the weight
  // vectors are mapped back through r so the scores refer to undeflated X.
  const int comps = static_cast<int>(std::min<Eigen::Index>(latents_, m));
  const double scale = std::max(1.0, s_xx.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  std::vector<VectorXd> p_vecs;
  std::vector<VectorXd> r_vecs;
  coef_ = VectorXd::Zero(m);
  for (int a = 0; a < comps; ++a) {
    const double xy_norm = s_xy.norm();
    if (xy_norm <= tol) break;
    VectorXd w = s_xy / xy_norm;
    VectorXd r = w;
    for (std::size_t b = 0; b < p_vecs.size(); ++b) {
      r -= (p_vecs[b].dot(w)) * r_vecs[b];
    }
    const double tt = r.dot(s_xx * r);
    if (tt <= tol) break;
    const VectorXd p = (s_xx * r) / tt;
    const double q = r.dot(s_xy) / tt;
    s_xy -= p * (q * tt);
    coef_ += r * q;
    p_vecs.push_back(p);
    r_vecs.push_back(r);
  }
}

RplsState rpls_update(const RplsState& state, const LabeledBatch& batch, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("RPLS lambda must be in (0, 1]");
  validate_batch(batch, TaskKind::regression, 0);

  RplsState out = state;
  const Eigen::Index m = batch.cols();
  if (!out.trained() && out.sum_x_.size() == 0) {
    out.sum_x_ = VectorXd::Zero(m);
    out.sum_xy_ = VectorXd::Zero(m);
    out.sum_xx_ = MatrixXd::Zero(m, m);
  } else if (m != out.sum_x_.size()) {
    throw DimensionError("RPLS feature count mismatch");
  }

  out.weight_ *= lambda;
  out.sum_x_ *= lambda;
  out.sum_y_ *= lambda;
  out.sum_xx_ *= lambda;
  out.sum_xy_ *= lambda;

  // Row-by-row accumulation keeps the result bit-identical however the same
  // rows are grouped into update calls (at lambda = 1).
  for (Eigen::Index r = 0; r < batch.rows(); ++r) {
    const VectorXd x = batch.inputs.row(r).transpose();
    const double y = batch.targets(r);
    out.weight_ += 1.0;
    out.sum_x_ += x;
    out.sum_y_ += y;
    out.sum_xx_ += x * x.transpose();
    out.sum_xy_ += x * y;
  }
  out.refit();
  return out;
}

RplsState rpls_update(const RplsState& state, const LabeledBatch& batch) {
  return rpls_update(state, batch, state.lambda());
}

RplsPrediction rpls_predict(const RplsState& state, const MatrixXd& inputs) {
  RplsPrediction out;
  if (!state.trained()) {
    out.values = VectorXd::Zero(inputs.rows());
    out.cold_start = true;
    return out;
  }
  if (inputs.cols() != state.n_features())
    throw DimensionError("RPLS predict feature count mismatch");
  out.values = ((inputs.rowwise() - state.input_mean().transpose()) * state.coefficients())
                   .array() +
               state.output_mean();
  return out;
}

}  // namespace adapt
