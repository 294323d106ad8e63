#pragma once

// Declarative experiment configuration: a small TOML-style reader (tables,
// arrays of tables, scalars, flat arrays, # comments) plus the validated
// experiment description. Validation is total: every problem in the file is
// reported in one ConfigError.

#include "adaptstream/common.hpp"
#include "adaptstream/strategy.hpp"
#include "adaptstream/streams.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace adapt {

class TomlValue;
using TomlArray = std::vector<TomlValue>;

class TomlValue {
 public:
  TomlValue() : value_(0.0) {}
  explicit TomlValue(double v) : value_(v) {}
  explicit TomlValue(bool v) : value_(v) {}
  explicit TomlValue(std::string v) : value_(std::move(v)) {}
  explicit TomlValue(TomlArray v) : value_(std::move(v)) {}

  bool is_number() const { return std::holds_alternative<double>(value_); }
  bool is_bool() const { return std::holds_alternative<bool>(value_); }
  bool is_string() const { return std::holds_alternative<std::string>(value_); }
  bool is_array() const { return std::holds_alternative<TomlArray>(value_); }

  double as_number() const;
  bool as_bool() const;
  const std::string& as_string() const;
  const TomlArray& as_array() const;

 private:
  std::variant<double, bool, std::string, TomlArray> value_;
};

struct TomlTable {
  std::map<std::string, TomlValue> values;
  std::map<std::string, TomlTable> tables;
  std::map<std::string, std::vector<TomlTable>> table_arrays;

  bool has(const std::string& key) const { return values.count(key) > 0; }
};

TomlTable parse_toml(const std::string& text);
TomlTable parse_toml_file(const std::string& path);

enum class DatasetSource { builtin, synthetic, csv };

struct DatasetSpec {
  std::string id;
  DatasetSource source = DatasetSource::synthetic;
  StreamSpec stream;      // builtin / synthetic
  std::string csv_path;   // csv
  TaskKind csv_task = TaskKind::classification;

  TaskKind task() const {
    return source == DatasetSource::csv ? csv_task : TaskKind::classification;
  }
};

struct HyperParams {
  // SABLE
  double sigma = 1.0;
  double lambda = 0.5;
  double delta0 = 0.0;
  double delta1 = 1.0;
  int latents = 2;
  double alpha = 0.05;
  // bDWM
  double eta = 0.01;
  // bPL
  int theta = 0;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string algorithm = "bdwm";  // sable | bdwm | bpl
  std::string out_dir = "out";
  std::vector<std::string> strategies;
  std::vector<int> batch_sizes;
  int q_folds = 10;
  int r_steps = 1;
  int test_multiplier = 100;
  HyperParams hyper;
  std::vector<DatasetSpec> datasets;

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_table(const TomlTable& table);
};

/// Strategy name -> spec. Names: seq<k>, joint, custom, xvselect, oracle,
/// each optionally suffixed with "+rc"; xvselectrc is an alias.
StrategySpec parse_strategy(const std::string& name, int q_folds, int r_steps);

}  // namespace adapt
