#pragma once

// Prequential scoring plus the rank statistics used to compare strategies
// across datasets (Friedman test with the Nemenyi critical difference).

#include "adaptstream/common.hpp"

#include <string>
#include <vector>

namespace adapt {

/// MAE for regression, error rate (1 - accuracy) for classification.
double score_batch(const VectorXd& predictions, const VectorXd& targets, TaskKind task);

/// Divide each mean loss by the largest one, mapping into (0, 1] with the
/// best strategy lowest. All-zero input maps to all zeros.
std::vector<double> normalize_scores(const std::vector<double>& losses);

struct FriedmanResult {
  double statistic = 0.0;
  MatrixXd ranks;        // datasets x strategies, average rank on ties
  VectorXd mean_ranks;   // per strategy
};

/// Ranks each dataset row (lower loss = rank 1) and computes the Friedman
/// chi-square statistic over the mean ranks.
FriedmanResult friedman_test(const MatrixXd& losses);

/// Nemenyi critical difference q_alpha(k) * sqrt(k (k+1) / (6 N)) for
/// k in [2, 10] and alpha in {0.05, 0.10}.
double nemenyi_critical_difference(int k, int n_datasets, double alpha = 0.05);

/// Result of one (dataset, strategy, batch size) cell.
struct RunRecord {
  std::string dataset_id;
  std::string strategy_id;
  int batch_size = 0;
  TaskKind task = TaskKind::classification;
  std::vector<int> batch_indices;  // scored batches
  std::vector<double> losses;
  std::vector<int> chosen_ams;     // kCustomStep / kJointStep sentinels allowed
  double wall_ms = 0.0;
  bool benchmark_only = false;     // set for Oracle runs

  double mean_loss() const;
};

}  // namespace adapt
