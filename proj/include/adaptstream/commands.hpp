#pragma once

// Pipeline entry points shared by the CLI and the test suites.

#include "adaptstream/config.hpp"
#include "adaptstream/report.hpp"

#include <string>
#include <vector>

namespace adapt {

struct GenDataResult {
  std::vector<std::string> csv_paths;
  std::string manifest_path;
};

/// Materialize every synthetic dataset as <out>/data/<id>.csv plus a JSON
/// manifest recording seed, spec and drift indices.
GenDataResult cmd_gen_data(const ExperimentConfig& config);

struct RunSummary {
  int total_cells = 0;
  int completed = 0;
  int skipped = 0;
  int failed = 0;
  std::vector<std::string> record_paths;
};

/// Execute the (dataset x strategy x batch size) grid, one record file per
/// cell under <out>/records plus a grid summary. Cells already on disk are
/// skipped when resume is set; cell failures are isolated.
RunSummary cmd_run(const ExperimentConfig& config, int jobs = 0, bool resume = false);

struct ReportResult {
  ReportFiles files;
  std::string summary_text;
};

/// Load record files from a directory and emit the report files.
ReportResult cmd_report(const std::string& records_dir, const std::string& out_dir);

/// (De)serialization of record files, exposed for the report path and tests.
std::string record_to_json(const RunRecord& record);
RunRecord record_from_json_file(const std::string& path);

}  // namespace adapt
