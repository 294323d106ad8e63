#include "adaptstream/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adapt {

double score_batch(const VectorXd& predictions, const VectorXd& targets, TaskKind task) {
  if (predictions.size() != targets.size())
    throw DimensionError("score_batch length mismatch");
  if (predictions.size() == 0) throw DimensionError("score_batch on empty vectors");
  if (task == TaskKind::regression) {
    return (predictions - targets).cwiseAbs().mean();
  }
  double misses = 0.0;
  for (Eigen::Index i = 0; i < predictions.size(); ++i)
    if (predictions(i) != targets(i)) misses += 1.0;
  return misses / static_cast<double>(predictions.size());
}

std::vector<double> normalize_scores(const std::vector<double>& losses) {
  if (losses.empty()) throw ConfigError("normalize_scores on empty input");
  const double top = *std::max_element(losses.begin(), losses.end());
  std::vector<double> out(losses.size(), 0.0);
  if (top <= 0.0) return out;
  for (std::size_t i = 0; i < losses.size(); ++i) out[i] = losses[i] / top;
  return out;
}

FriedmanResult friedman_test(const MatrixXd& losses) {
  const Eigen::Index n = losses.rows();
  const Eigen::Index k = losses.cols();
  if (k < 2 || n < 2) throw ConfigError("friedman_test needs >= 2 strategies and >= 2 datasets");

  FriedmanResult result;
  result.ranks.resize(n, k);
  for (Eigen::Index row = 0; row < n; ++row) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return losses(row, a) < losses(row, b); });
    // Average rank across tied values.
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && losses(row, order[j + 1]) == losses(row, order[i])) ++j;
      const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) result.ranks(row, order[t]) = avg_rank;
      i = j + 1;
    }
  }
  result.mean_ranks = result.ranks.colwise().mean();

  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  const double sum_sq = result.mean_ranks.array().square().sum();
  result.statistic = 12.0 * nn / (kk * (kk + 1.0)) * (sum_sq - kk * (kk + 1.0) * (kk + 1.0) / 4.0);
  return result;
}

double nemenyi_critical_difference(int k, int n_datasets, double alpha) {
  if (k < 2 || k > 10) throw ConfigError("nemenyi critical difference tabulated for k in [2, 10]");
  if (n_datasets < 1) throw ConfigError("nemenyi critical difference needs >= 1 dataset");
  // Studentized range / sqrt(2) at infinite df, indexed by k - 2.
  static const double q_05[] = {1.959964, 2.343701, 2.569032, 2.727774, 2.849705,
                                2.948319, 3.030879, 3.101730, 3.163684};
  static const double q_10[] = {1.644854, 2.052293, 2.291341, 2.459516, 2.588521,
                                2.692732, 2.779884, 2.854606, 2.919889};
  const double* table = nullptr;
  if (std::abs(alpha - 0.05) < 1e-12) table = q_05;
  else if (std::abs(alpha - 0.10) < 1e-12) table = q_10;
  else throw ConfigError("nemenyi alpha must be 0.05 or 0.10");
  const double kk = static_cast<double>(k);
  return table[k - 2] * std::sqrt(kk * (kk + 1.0) / (6.0 * static_cast<double>(n_datasets)));
}

double RunRecord::mean_loss() const {
  if (losses.empty()) return 0.0;
  double sum = 0.0;
  for (double v : losses) sum += v;
  return sum / static_cast<double>(losses.size());
}

}  // namespace adapt
