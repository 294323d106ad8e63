// Command line front end: gen-data | run | report, driven by a declarative
// experiment config. Exit codes: 0 success, 1 cell failures, 2 bad config.

#include "adaptstream/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

adapt::ExperimentConfig load_config(const std::string& path, long long seed_override,
                                    const std::string& out_override) {
  adapt::ExperimentConfig config = adapt::ExperimentConfig::load(path);
  if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
  if (!out_override.empty()) config.out_dir = out_override;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptation-strategy experiments on batch data streams"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  long long seed_override = -1;
  int jobs = 0;
  bool resume = false;
  std::string records_dir;

  auto* gen = app.add_subcommand("gen-data", "materialize synthetic datasets as CSV");
  gen->add_option("--config", config_path, "experiment config file")->required();
  gen->add_option("--seed", seed_override, "override the config seed");
  gen->add_option("--out", out_override, "override the output directory");

  auto* run = app.add_subcommand("run", "execute the experiment grid");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--seed", seed_override, "override the config seed");
  run->add_option("--out", out_override, "override the output directory");
  run->add_option("--jobs", jobs, "worker threads (default: available cores)");
  run->add_flag("--resume", resume, "skip cells whose record file already exists");

  auto* report = app.add_subcommand("report", "aggregate records into report files");
  report->add_option("--config", config_path, "experiment config file");
  report->add_option("--records", records_dir, "records directory (default <out>/records)");
  report->add_option("--out", out_override, "override the output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto config = load_config(config_path, seed_override, out_override);
      const auto result = adapt::cmd_gen_data(config);
      std::cerr << "wrote " << result.csv_paths.size() << " dataset file(s) and "
                << result.manifest_path << "\n";
      return 0;
    }
    if (run->parsed()) {
      const auto config = load_config(config_path, seed_override, out_override);
      const auto summary = adapt::cmd_run(config, jobs, resume);
      std::cerr << "grid finished: " << summary.completed << " ok, " << summary.skipped
                << " skipped, " << summary.failed << " failed\n";
      return summary.failed > 0 ? 1 : 0;
    }
    if (report->parsed()) {
      std::string out_dir = out_override;
      if (out_dir.empty() && !config_path.empty())
        out_dir = adapt::ExperimentConfig::load(config_path).out_dir;
      if (out_dir.empty()) out_dir = "out";
      std::string records = records_dir;
      if (records.empty())
        records = (std::filesystem::path(out_dir) / "records").string();
      const auto result =
          adapt::cmd_report(records, (std::filesystem::path(out_dir) / "report").string());
      std::cout << result.summary_text;
      return 0;
    }
  } catch (const adapt::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const adapt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
