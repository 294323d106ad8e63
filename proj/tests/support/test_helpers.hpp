#pragma once

#include "adaptstream/common.hpp"

#include <cstdint>
#include <vector>

namespace testsupport {

using adapt::LabeledBatch;
using adapt::MatrixXd;
using adapt::VectorXd;

inline LabeledBatch make_batch(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& targets, int index = 0) {
  LabeledBatch batch;
  batch.index = index;
  batch.inputs.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  batch.targets.resize(static_cast<Eigen::Index>(targets.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      batch.inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    batch.targets(static_cast<Eigen::Index>(r)) = targets[r];
  }
  return batch;
}

/// Random regression batch: standard normal features, y = x * coef + offset
/// + noise_sd * N(0,1).
inline LabeledBatch random_linear_batch(adapt::Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                        const VectorXd& coef, double offset, double noise_sd,
                                        int index = 0) {
  LabeledBatch batch;
  batch.index = index;
  batch.inputs.resize(rows, cols);
  batch.targets.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) batch.inputs(r, c) = rng.normal();
    batch.targets(r) = batch.inputs.row(r).dot(coef) + offset + noise_sd * rng.normal();
  }
  return batch;
}

/// Random 2-feature classification batch with class-conditional Gaussian
/// clusters centered on the given means.
inline LabeledBatch random_cluster_batch(adapt::Rng& rng, Eigen::Index rows,
                                         const std::vector<Eigen::Vector2d>& means,
                                         double spread = 1.0, int index = 0) {
  LabeledBatch batch;
  batch.index = index;
  batch.inputs.resize(rows, 2);
  batch.targets.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int label = rng.uniform_int(static_cast<int>(means.size()));
    batch.inputs(r, 0) = means[static_cast<std::size_t>(label)].x() + spread * rng.normal();
    batch.inputs(r, 1) = means[static_cast<std::size_t>(label)].y() + spread * rng.normal();
    batch.targets(r) = label;
  }
  return batch;
}

inline LabeledBatch concat_batches(const LabeledBatch& a, const LabeledBatch& b) {
  LabeledBatch out;
  out.index = a.index;
  out.inputs.resize(a.rows() + b.rows(), a.cols());
  out.inputs << a.inputs, b.inputs;
  out.targets.resize(a.targets.size() + b.targets.size());
  out.targets << a.targets, b.targets;
  return out;
}

}  // namespace testsupport
