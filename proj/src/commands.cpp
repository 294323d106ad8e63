#include "adaptstream/commands.hpp"

#include "adaptstream/csv.hpp"
#include "adaptstream/models.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <thread>

namespace adapt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

std::string csv_cell(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

}  // namespace

GenDataResult cmd_gen_data(const ExperimentConfig& config) {
  const fs::path data_dir = fs::path(config.out_dir) / "data";
  fs::create_directories(data_dir);

  GenDataResult result;
  json manifest;
  manifest["schema"] = 1;
  manifest["seed"] = config.seed;
  manifest["datasets"] = json::array();

  for (const auto& ds : config.datasets) {
    if (ds.source == DatasetSource::csv) {
      json entry;
      entry["id"] = ds.id;
      entry["source"] = "csv";
      entry["path"] = ds.csv_path;
      manifest["datasets"].push_back(entry);
      continue;
    }
    RawStream stream = gen_stream(ds.stream, Rng::derive(config.seed, ds.id));
    inject_label_noise(stream, ds.stream.noise_rate, Rng::derive(config.seed, ds.id + "/noise"));

    const fs::path csv_path = data_dir / (ds.id + ".csv");
    std::string text = "x1,x2,y\n";
    for (Eigen::Index r = 0; r < stream.inputs.rows(); ++r) {
      text += csv_cell(stream.inputs(r, 0));
      text += ',';
      text += csv_cell(stream.inputs(r, 1));
      text += ',';
      text += std::to_string(static_cast<int>(stream.targets(r)));
      text += '\n';
    }
    write_text_file(csv_path.string(), text);
    result.csv_paths.push_back(csv_path.string());

    json entry;
    entry["id"] = ds.id;
    entry["source"] = "synthetic";
    entry["family"] = to_string(ds.stream.family);
    entry["instances"] = ds.stream.n_instances;
    entry["classes"] = ds.stream.n_classes;
    entry["noise"] = ds.stream.noise_rate;
    entry["overlap"] = ds.stream.overlap;
    entry["rows_written"] = stream.inputs.rows();
    entry["csv"] = csv_path.string();
    json drifts = json::array();
    for (const auto& d : ds.stream.drifts) {
      drifts.push_back({{"at", d.at_instance},
                        {"magnitude", d.magnitude},
                        {"kind", to_string(d.kind)}});
    }
    entry["drifts"] = drifts;
    manifest["datasets"].push_back(entry);
  }

  const fs::path manifest_path = data_dir / "manifest.json";
  write_text_file(manifest_path.string(), manifest.dump(2) + "\n");
  result.manifest_path = manifest_path.string();
  return result;
}

std::string record_to_json(const RunRecord& record) {
  json j;
  j["schema"] = 1;
  j["dataset"] = record.dataset_id;
  j["strategy"] = record.strategy_id;
  j["batch_size"] = record.batch_size;
  j["task"] = to_string(record.task);
  j["benchmark_only"] = record.benchmark_only;
  j["batch_indices"] = record.batch_indices;
  j["losses"] = record.losses;
  j["chosen_ams"] = record.chosen_ams;
  j["wall_ms"] = record.wall_ms;
  return j.dump(2) + "\n";
}

RunRecord record_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open record file: " + path);
  json j;
  in >> j;
  RunRecord record;
  record.dataset_id = j.at("dataset").get<std::string>();
  record.strategy_id = j.at("strategy").get<std::string>();
  record.batch_size = j.at("batch_size").get<int>();
  record.task = task_kind_from_string(j.at("task").get<std::string>());
  record.benchmark_only = j.at("benchmark_only").get<bool>();
  record.batch_indices = j.at("batch_indices").get<std::vector<int>>();
  record.losses = j.at("losses").get<std::vector<double>>();
  record.chosen_ams = j.at("chosen_ams").get<std::vector<int>>();
  record.wall_ms = j.at("wall_ms").get<double>();
  return record;
}

namespace {

struct Cell {
  const DatasetSpec* dataset;
  std::string strategy;
  int batch_size;
};

struct LoadedCsv {
  CsvData data;
};

std::unique_ptr<Model> make_model(const ExperimentConfig& config, int n_classes) {
  if (config.algorithm == "sable") {
    SableParams params;
    params.sigma = config.hyper.sigma;
    params.lambda = config.hyper.lambda;
    params.delta0 = config.hyper.delta0;
    params.delta1 = config.hyper.delta1;
    params.latents = config.hyper.latents;
    params.alpha = config.hyper.alpha;
    return std::make_unique<SableModel>(params);
  }
  if (config.algorithm == "bdwm")
    return std::make_unique<DwmModel>(n_classes, config.hyper.eta);
  return std::make_unique<PlModel>(n_classes, config.hyper.theta);
}

RunRecord run_cell(const ExperimentConfig& config, const Cell& cell, const LoadedCsv* csv) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t min_tail = static_cast<std::size_t>(std::max(config.q_folds, 2));

  GeneratedStream stream;
  if (cell.dataset->source == DatasetSource::csv) {
    RawStream raw;
    raw.inputs = csv->data.inputs;
    raw.targets = csv->data.targets;
    raw.spec.id = cell.dataset->id;
    raw.spec.n_instances = static_cast<std::size_t>(csv->data.inputs.rows());
    raw.spec.n_classes = std::max(csv->data.n_classes, 2);
    raw.segment_starts = {0};
    raw.segments = {ConceptSnapshot{}};
    stream = batchify(raw, static_cast<std::size_t>(cell.batch_size), min_tail, 0, 0);
    stream.task = csv->data.task;
    stream.n_classes = csv->data.n_classes;
  } else {
    RawStream raw = gen_stream(cell.dataset->stream, Rng::derive(config.seed, cell.dataset->id));
    inject_label_noise(raw, cell.dataset->stream.noise_rate,
                       Rng::derive(config.seed, cell.dataset->id + "/noise"));
    stream = batchify(raw, static_cast<std::size_t>(cell.batch_size), min_tail,
                      config.test_multiplier,
                      Rng::derive(config.seed, cell.dataset->id + "/test"));
  }

  const StrategySpec spec = parse_strategy(cell.strategy, config.q_folds, config.r_steps);
  PredictorState initial(make_model(config, stream.n_classes));
  const auto ams = mechanism_set(initial.model());

  EvaluationSets eval_sets;
  const EvaluationSets* eval_ptr = nullptr;
  if (!stream.test_inputs.empty()) {
    eval_sets.inputs = stream.test_inputs;
    eval_sets.targets = stream.test_targets;
    eval_ptr = &eval_sets;
  }

  const auto batch_records =
      run_strategy(std::move(initial), stream.batches, spec, ams, eval_ptr);

  RunRecord record;
  record.dataset_id = cell.dataset->id;
  record.strategy_id = cell.strategy;
  record.batch_size = cell.batch_size;
  record.task = stream.task;
  record.benchmark_only = spec.kind == StrategyKind::oracle;
  for (const auto& br : batch_records) {
    record.batch_indices.push_back(br.batch_index);
    record.losses.push_back(br.loss);
    record.chosen_ams.push_back(br.chosen_am);
  }
  record.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return record;
}

std::string cell_file_name(const Cell& cell) {
  return cell.dataset->id + "__" + cell.strategy + "__n" + std::to_string(cell.batch_size) +
         ".json";
}

}  // namespace

RunSummary cmd_run(const ExperimentConfig& config, int jobs, bool resume) {
  const fs::path records_dir = fs::path(config.out_dir) / "records";
  fs::create_directories(records_dir);

  // CSV datasets load once, shared read-only by the workers.
  std::map<std::string, LoadedCsv> csv_cache;
  for (const auto& ds : config.datasets) {
    if (ds.source != DatasetSource::csv) continue;
    csv_cache[ds.id].data = load_csv_stream(ds.csv_path, CsvSchema{ds.csv_task});
    for (const auto& [line, reason] : csv_cache[ds.id].data.rejected)
      warn(ds.id + ": rejected line " + std::to_string(line) + " (" + reason + ")");
  }

  std::vector<Cell> cells;
  for (const auto& ds : config.datasets)
    for (const auto& strategy : config.strategies)
      for (int n : config.batch_sizes) cells.push_back(Cell{&ds, strategy, n});

  RunSummary summary;
  summary.total_cells = static_cast<int>(cells.size());

  struct CellStatus {
    std::string status;  // ok | skipped | failed
    std::string message;
  };
  std::vector<CellStatus> statuses(cells.size());

  std::atomic<std::size_t> next{0};
  std::atomic<int> done{0};
  std::mutex io_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      const fs::path path = records_dir / cell_file_name(cell);
      const std::string label =
          cell.dataset->id + " " + cell.strategy + " n=" + std::to_string(cell.batch_size);
      if (resume && fs::exists(path)) {
        statuses[i] = {"skipped", ""};
        std::lock_guard<std::mutex> lock(io_mutex);
        std::cerr << "[" << ++done << "/" << cells.size() << "] " << label
                  << " skipped (resume)\n";
        continue;
      }
      try {
        const RunRecord record = run_cell(config, cell, csv_cache.count(cell.dataset->id)
                                                            ? &csv_cache.at(cell.dataset->id)
                                                            : nullptr);
        write_text_file(path.string(), record_to_json(record));
        statuses[i] = {"ok", ""};
        std::lock_guard<std::mutex> lock(io_mutex);
        std::cerr << "[" << ++done << "/" << cells.size() << "] " << label << " mean loss "
                  << format_double(record.mean_loss()) << "\n";
      } catch (const std::exception& e) {
        statuses[i] = {"failed", e.what()};
        std::lock_guard<std::mutex> lock(io_mutex);
        std::cerr << "[" << ++done << "/" << cells.size() << "] " << label
                  << " FAILED: " << e.what() << "\n";
      }
    }
  };

  int thread_count = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  if (thread_count < 1) thread_count = 1;
  thread_count = std::min<int>(thread_count, static_cast<int>(cells.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  json grid;
  grid["schema"] = 1;
  grid["seed"] = config.seed;
  grid["algorithm"] = config.algorithm;
  grid["cells"] = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    json entry;
    entry["dataset"] = cells[i].dataset->id;
    entry["strategy"] = cells[i].strategy;
    entry["batch_size"] = cells[i].batch_size;
    entry["status"] = statuses[i].status;
    if (!statuses[i].message.empty()) entry["error"] = statuses[i].message;
    grid["cells"].push_back(entry);
    if (statuses[i].status == "ok") {
      summary.completed += 1;
      summary.record_paths.push_back((records_dir / cell_file_name(cells[i])).string());
    } else if (statuses[i].status == "skipped") {
      summary.skipped += 1;
      summary.record_paths.push_back((records_dir / cell_file_name(cells[i])).string());
    } else {
      summary.failed += 1;
    }
  }
  write_text_file((records_dir / "grid_summary.json").string(), grid.dump(2) + "\n");
  return summary;
}

ReportResult cmd_report(const std::string& records_dir, const std::string& out_dir) {
  if (!fs::exists(records_dir)) throw IoError("records directory not found: " + records_dir);
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(records_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "grid_summary.json" || entry.path().extension() != ".json") continue;
    paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw IoError("no record files in " + records_dir);

  std::vector<RunRecord> records;
  for (const auto& path : paths) records.push_back(record_from_json_file(path));

  ReportResult result;
  result.files = write_report(records, out_dir);
  result.summary_text = rank_summary_text(records);
  return result;
}

}  // namespace adapt
