#pragma once

// CSV ingestion of real datasets: UTF-8, comma separated, one header row,
// feature columns followed by the target in the last column.

#include "adaptstream/common.hpp"

#include <string>
#include <utility>
#include <vector>

namespace adapt {

struct CsvSchema {
  TaskKind task = TaskKind::classification;
};

struct CsvData {
  TaskKind task = TaskKind::classification;
  MatrixXd inputs;
  VectorXd targets;
  int n_classes = 0;                      // classification only
  std::vector<std::string> label_names;   // source label per class id
  std::vector<std::pair<int, std::string>> rejected;  // (line number, reason)
};

/// Parses the file, mapping classification labels to dense 0..J-1 ids in
/// first-appearance order. Malformed rows are skipped and reported with
/// their line numbers; a file without data rows is a ConfigError.
CsvData load_csv_stream(const std::string& path, const CsvSchema& schema);

}  // namespace adapt
