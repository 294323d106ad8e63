#pragma once

// Independent reference for the recursive PLS implementation: classic NIPALS
// PLS1 with explicit deflation of the raw, centered data matrix. Used only by
// tests; keep it free of the library's covariance-form code path.

#include <Eigen/Dense>

namespace testsupport {

struct PlsOracleModel {
  Eigen::RowVectorXd mean_x;
  double mean_y = 0.0;
  Eigen::VectorXd coef;
};

inline PlsOracleModel pls_fit_reference(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        int latents) {
  PlsOracleModel model;
  model.mean_x = x.colwise().mean();
  model.mean_y = y.mean();
  Eigen::MatrixXd residual_x = x.rowwise() - model.mean_x;
  Eigen::VectorXd residual_y = y.array() - model.mean_y;

  const Eigen::Index m = x.cols();
  const int comps = static_cast<int>(std::min<Eigen::Index>(latents, m));
  Eigen::MatrixXd weights(m, comps);
  Eigen::MatrixXd loadings(m, comps);
  Eigen::VectorXd q(comps);
  int extracted = 0;
  for (int a = 0; a < comps; ++a) {
    Eigen::VectorXd w = residual_x.transpose() * residual_y;
    const double wn = w.norm();
    if (wn < 1e-12) break;
    w /= wn;
    const Eigen::VectorXd t = residual_x * w;
    const double tt = t.squaredNorm();
    if (tt < 1e-12) break;
    const Eigen::VectorXd p = residual_x.transpose() * t / tt;
    const double qa = residual_y.dot(t) / tt;
    residual_x -= t * p.transpose();
    residual_y -= qa * t;
    weights.col(a) = w;
    loadings.col(a) = p;
    q(a) = qa;
    ++extracted;
  }
  if (extracted == 0) {
    model.coef = Eigen::VectorXd::Zero(m);
    return model;
  }
  const Eigen::MatrixXd w_used = weights.leftCols(extracted);
  const Eigen::MatrixXd p_used = loadings.leftCols(extracted);
  model.coef =
      w_used * (p_used.transpose() * w_used).lu().solve(q.head(extracted));
  return model;
}

inline Eigen::VectorXd pls_predict_reference(const PlsOracleModel& model,
                                             const Eigen::MatrixXd& probes) {
  return ((probes.rowwise() - model.mean_x) * model.coef).array() + model.mean_y;
}

}  // namespace testsupport
