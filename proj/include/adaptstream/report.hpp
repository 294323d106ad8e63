#pragma once

// Report emission: per-dataset score tables, rank summaries with the
// Friedman statistic and Nemenyi critical difference, and a rank-axis SVG
// diagram, one set of files per batch size.

#include "adaptstream/evaluation.hpp"

#include <string>
#include <vector>

namespace adapt {

struct ReportFiles {
  std::vector<std::string> score_csvs;
  std::vector<std::string> rank_csvs;
  std::vector<std::string> rank_svgs;
};

/// Writes scores_n<k>.csv, ranks_n<k>.csv and ranks_n<k>.svg into out_dir.
/// Output is byte-deterministic for the same records. Runs with a single
/// strategy or dataset skip the rank statistics for that batch size.
ReportFiles write_report(const std::vector<RunRecord>& records, const std::string& out_dir);

/// The mean-rank summary as printable text (also embedded in the rank CSVs).
std::string rank_summary_text(const std::vector<RunRecord>& records);

/// Fixed-format float used in every emitted file.
std::string format_double(double value);

}  // namespace adapt
