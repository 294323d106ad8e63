#include "adaptstream/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace adapt {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

namespace {

struct Grid {
  std::vector<std::string> datasets;    // sorted
  std::vector<std::string> strategies;  // sorted
  MatrixXd mean_losses;                 // datasets x strategies
};

/// Group records of one batch size into a dense (dataset x strategy) table.
Grid build_grid(const std::vector<const RunRecord*>& records) {
  std::set<std::string> dataset_set, strategy_set;
  for (const auto* r : records) {
    dataset_set.insert(r->dataset_id);
    strategy_set.insert(r->strategy_id);
  }
  Grid grid;
  grid.datasets.assign(dataset_set.begin(), dataset_set.end());
  grid.strategies.assign(strategy_set.begin(), strategy_set.end());
  grid.mean_losses = MatrixXd::Constant(static_cast<Eigen::Index>(grid.datasets.size()),
                                        static_cast<Eigen::Index>(grid.strategies.size()),
                                        std::numeric_limits<double>::quiet_NaN());
  auto index_of = [](const std::vector<std::string>& values, const std::string& v) {
    return static_cast<Eigen::Index>(
        std::lower_bound(values.begin(), values.end(), v) - values.begin());
  };
  for (const auto* r : records)
    grid.mean_losses(index_of(grid.datasets, r->dataset_id),
                     index_of(grid.strategies, r->strategy_id)) = r->mean_loss();
  if (grid.mean_losses.hasNaN())
    throw ConfigError("report grid is incomplete: some (dataset, strategy) cells are missing");
  return grid;
}

void write_scores_csv(const Grid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "dataset";
  for (const auto& s : grid.strategies) out << "," << s;
  out << "\n";
  for (std::size_t d = 0; d < grid.datasets.size(); ++d) {
    out << grid.datasets[d];
    for (std::size_t s = 0; s < grid.strategies.size(); ++s)
      out << ","
          << format_double(grid.mean_losses(static_cast<Eigen::Index>(d),
                                            static_cast<Eigen::Index>(s)));
    out << "\n";
  }
}

void write_ranks_csv(const Grid& grid, const FriedmanResult& friedman, double cd,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "strategy,mean_rank,mean_loss\n";
  for (std::size_t s = 0; s < grid.strategies.size(); ++s) {
    out << grid.strategies[s] << ","
        << format_double(friedman.mean_ranks(static_cast<Eigen::Index>(s))) << ","
        << format_double(grid.mean_losses.col(static_cast<Eigen::Index>(s)).mean()) << "\n";
  }
  out << "friedman_statistic," << format_double(friedman.statistic) << ",\n";
  out << "nemenyi_cd_0.05," << format_double(cd) << ",\n";
}

void write_rank_svg(const Grid& grid, const FriedmanResult& friedman, double cd,
                    const std::string& path) {
  const int k = static_cast<int>(grid.strategies.size());
  const double width = 720.0, axis_left = 60.0, axis_right = 660.0, axis_y = 60.0;
  const double height = 110.0 + 18.0 * k;
  auto rank_to_x = [&](double rank) {
    return axis_left + (rank - 1.0) / std::max(1.0, static_cast<double>(k - 1)) *
                           (axis_right - axis_left);
  };

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "  <line x1=\"" << axis_left << "\" y1=\"" << axis_y << "\" x2=\"" << axis_right
      << "\" y2=\"" << axis_y << "\" stroke=\"black\"/>\n";
  for (int r = 1; r <= k; ++r) {
    const double x = rank_to_x(r);
    out << "  <line x1=\"" << x << "\" y1=\"" << axis_y - 5 << "\" x2=\"" << x << "\" y2=\""
        << axis_y + 5 << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << x << "\" y=\"" << axis_y - 10
        << "\" text-anchor=\"middle\" font-size=\"11\">" << r << "</text>\n";
  }
  // Critical difference bar.
  out << "  <line x1=\"" << rank_to_x(1.0) << "\" y1=\"" << axis_y - 30 << "\" x2=\""
      << rank_to_x(1.0 + cd) << "\" y2=\"" << axis_y - 30
      << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
  out << "  <text x=\"" << rank_to_x(1.0) << "\" y=\"" << axis_y - 36
      << "\" font-size=\"11\">CD = " << format_double(cd) << "</text>\n";

  // Strategies ordered by mean rank; each gets a marker and a label row.
  std::vector<std::size_t> order(grid.strategies.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = friedman.mean_ranks(static_cast<Eigen::Index>(a));
    const double rb = friedman.mean_ranks(static_cast<Eigen::Index>(b));
    if (ra != rb) return ra < rb;
    return grid.strategies[a] < grid.strategies[b];
  });
  double label_y = axis_y + 40.0;
  for (std::size_t idx : order) {
    const double rank = friedman.mean_ranks(static_cast<Eigen::Index>(idx));
    const double x = rank_to_x(rank);
    out << "  <line x1=\"" << x << "\" y1=\"" << axis_y << "\" x2=\"" << x << "\" y2=\""
        << label_y - 4 << "\" stroke=\"gray\" stroke-dasharray=\"2,2\"/>\n";
    out << "  <text x=\"" << x << "\" y=\"" << label_y << "\" text-anchor=\"middle\" "
        << "font-size=\"11\">" << grid.strategies[idx] << " (" << format_double(rank)
        << ")</text>\n";
    label_y += 18.0;
  }
  out << "</svg>\n";
}

std::map<int, std::vector<const RunRecord*>> by_batch_size(
    const std::vector<RunRecord>& records) {
  std::map<int, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[r.batch_size].push_back(&r);
  for (auto& [n, group] : groups) {
    std::sort(group.begin(), group.end(), [](const RunRecord* a, const RunRecord* b) {
      return std::tie(a->dataset_id, a->strategy_id) < std::tie(b->dataset_id, b->strategy_id);
    });
  }
  return groups;
}

}  // namespace

ReportFiles write_report(const std::vector<RunRecord>& records, const std::string& out_dir) {
  if (records.empty()) throw ConfigError("write_report requires at least one record");
  fs::create_directories(out_dir);

  ReportFiles files;
  for (const auto& [n, group] : by_batch_size(records)) {
    const Grid grid = build_grid(group);
    const std::string suffix = "_n" + std::to_string(n);
    const std::string scores_path = (fs::path(out_dir) / ("scores" + suffix + ".csv")).string();
    write_scores_csv(grid, scores_path);
    files.score_csvs.push_back(scores_path);

    if (grid.strategies.size() >= 2 && grid.datasets.size() >= 2 &&
        grid.strategies.size() <= 10) {
      const FriedmanResult friedman = friedman_test(grid.mean_losses);
      const double cd = nemenyi_critical_difference(
          static_cast<int>(grid.strategies.size()), static_cast<int>(grid.datasets.size()));
      const std::string ranks_path = (fs::path(out_dir) / ("ranks" + suffix + ".csv")).string();
      write_ranks_csv(grid, friedman, cd, ranks_path);
      files.rank_csvs.push_back(ranks_path);
      const std::string svg_path = (fs::path(out_dir) / ("ranks" + suffix + ".svg")).string();
      write_rank_svg(grid, friedman, cd, svg_path);
      files.rank_svgs.push_back(svg_path);
    }
  }
  return files;
}

std::string rank_summary_text(const std::vector<RunRecord>& records) {
  if (records.empty()) throw ConfigError("rank summary requires at least one record");
  std::ostringstream out;
  for (const auto& [n, group] : by_batch_size(records)) {
    out << "batch size " << n << ":\n";
    const Grid grid = build_grid(group);
    if (grid.strategies.size() < 2 || grid.datasets.size() < 2) {
      for (std::size_t s = 0; s < grid.strategies.size(); ++s)
        out << "  " << grid.strategies[s] << "  mean loss "
            << format_double(grid.mean_losses.col(static_cast<Eigen::Index>(s)).mean()) << "\n";
      continue;
    }
    const FriedmanResult friedman = friedman_test(grid.mean_losses);
    std::vector<std::size_t> order(grid.strategies.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return friedman.mean_ranks(static_cast<Eigen::Index>(a)) <
             friedman.mean_ranks(static_cast<Eigen::Index>(b));
    });
    for (std::size_t idx : order)
      out << "  " << grid.strategies[idx] << "  mean rank "
          << format_double(friedman.mean_ranks(static_cast<Eigen::Index>(idx))) << "\n";
    out << "  Friedman statistic " << format_double(friedman.statistic);
    if (grid.strategies.size() <= 10)
      out << ", Nemenyi CD(0.05) "
          << format_double(nemenyi_critical_difference(
                 static_cast<int>(grid.strategies.size()),
                 static_cast<int>(grid.datasets.size())));
    out << "\n";
  }
  return out.str();
}

}  // namespace adapt
