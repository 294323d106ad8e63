#include "adaptstream/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace adapt {

double TomlValue::as_number() const {
  if (!is_number()) throw ConfigError("config value is not a number");
  return std::get<double>(value_);
}

bool TomlValue::as_bool() const {
  if (!is_bool()) throw ConfigError("config value is not a boolean");
  return std::get<bool>(value_);
}

const std::string& TomlValue::as_string() const {
  if (!is_string()) throw ConfigError("config value is not a string");
  return std::get<std::string>(value_);
}

const TomlArray& TomlValue::as_array() const {
  if (!is_array()) throw ConfigError("config value is not an array");
  return std::get<TomlArray>(value_);
}

namespace {

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

/// Removes a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

TomlValue parse_scalar(const std::string& text, int line_no) {
  const std::string t = strip(text);
  if (t.empty()) throw ParseError("missing value", line_no);
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') throw ParseError("unterminated string", line_no);
    return TomlValue(t.substr(1, t.size() - 2));
  }
  if (t == "true") return TomlValue(true);
  if (t == "false") return TomlValue(false);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw ParseError("malformed number: " + t, line_no);
    return TomlValue(v);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("malformed value: " + t, line_no);
  }
}

TomlValue parse_value(const std::string& text, int line_no) {
  const std::string t = strip(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ParseError("unterminated array", line_no);
    TomlArray items;
    std::string body = t.substr(1, t.size() - 2);
    std::string item;
    bool in_string = false;
    for (char c : body) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        if (!strip(item).empty()) items.push_back(parse_scalar(item, line_no));
        item.clear();
      } else {
        item += c;
      }
    }
    if (!strip(item).empty()) items.push_back(parse_scalar(item, line_no));
    return TomlValue(std::move(items));
  }
  return parse_scalar(t, line_no);
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
  TomlTable root;
  TomlTable* current = &root;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      const bool is_array = line.size() > 1 && line[1] == '[';
      const std::string closer = is_array ? "]]" : "]";
      if (line.substr(line.size() - closer.size()) != closer)
        throw ParseError("malformed table header", line_no);
      const std::string name =
          strip(line.substr(is_array ? 2 : 1, line.size() - 2 * (is_array ? 2 : 1)));
      if (name.empty()) throw ParseError("empty table name", line_no);
      if (is_array) {
        root.table_arrays[name].emplace_back();
        current = &root.table_arrays[name].back();
      } else {
        current = &root.tables[name];
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = strip(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (current->values.count(key)) throw ParseError("duplicate key: " + key, line_no);
    current->values.emplace(key, parse_value(line.substr(eq + 1), line_no));
  }
  return root;
}

TomlTable parse_toml_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_toml(buffer.str());
}

StrategySpec parse_strategy(const std::string& name, int q_folds, int r_steps) {
  StrategySpec spec;
  spec.q_folds = q_folds;
  spec.r_steps = r_steps;

  std::string base = name;
  const auto plus = name.find("+rc");
  if (plus != std::string::npos && plus + 3 == name.size()) {
    spec.rc_enabled = true;
    base = name.substr(0, plus);
  }
  if (base == "xvselectrc") {
    spec.rc_enabled = true;
    base = "xvselect";
  }

  if (base.rfind("seq", 0) == 0 && base.size() > 3) {
    spec.kind = StrategyKind::sequence;
    for (char c : base.substr(3))
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ConfigError("unknown strategy: " + name);
    spec.sequence_am = std::stoi(base.substr(3));
    return spec;
  }
  if (base == "joint") spec.kind = StrategyKind::joint;
  else if (base == "custom") spec.kind = StrategyKind::custom;
  else if (base == "xvselect") spec.kind = StrategyKind::xv_select;
  else if (base == "oracle") spec.kind = StrategyKind::oracle;
  else throw ConfigError("unknown strategy: " + name);
  return spec;
}

namespace {

class Collector {
 public:
  void add(const std::string& message) { errors_.push_back(message); }
  bool ok() const { return errors_.empty(); }
  [[noreturn]] void raise() const {
    std::string joined = "invalid configuration:";
    for (const auto& e : errors_) joined += "\n  - " + e;
    throw ConfigError(joined);
  }

 private:
  std::vector<std::string> errors_;
};

double get_number(const TomlTable& t, const std::string& key, double fallback) {
  return t.has(key) ? t.values.at(key).as_number() : fallback;
}

std::string get_string(const TomlTable& t, const std::string& key, const std::string& fallback) {
  return t.has(key) ? t.values.at(key).as_string() : fallback;
}

DatasetSpec parse_dataset(const TomlTable& t, Collector& errors) {
  DatasetSpec ds;
  ds.id = get_string(t, "id", "");
  if (ds.id.empty()) errors.add("dataset entry without id");
  const std::string source = get_string(t, "source", "synthetic");

  if (source == "builtin") {
    ds.source = DatasetSource::builtin;
    bool found = false;
    for (const auto& spec : builtin_synthetic_suite()) {
      if (spec.id == ds.id) {
        ds.stream = spec;
        found = true;
        break;
      }
    }
    if (!found) errors.add("dataset " + ds.id + ": no such built-in stream");
    return ds;
  }
  if (source == "csv") {
    ds.source = DatasetSource::csv;
    ds.csv_path = get_string(t, "path", "");
    if (ds.csv_path.empty()) {
      errors.add("dataset " + ds.id + ": csv source needs a path");
    } else if (!std::filesystem::exists(ds.csv_path)) {
      errors.add("dataset " + ds.id + ": file not found: " + ds.csv_path);
    }
    try {
      ds.csv_task = task_kind_from_string(get_string(t, "task", "classification"));
    } catch (const ConfigError& e) {
      errors.add("dataset " + ds.id + ": " + e.what());
    }
    return ds;
  }
  if (source != "synthetic") {
    errors.add("dataset " + ds.id + ": unknown source '" + source + "'");
    return ds;
  }

  ds.source = DatasetSource::synthetic;
  StreamSpec& s = ds.stream;
  s.id = ds.id;
  try {
    s.family = stream_family_from_string(get_string(t, "family", "hyperplane"));
  } catch (const ConfigError& e) {
    errors.add("dataset " + ds.id + ": " + e.what());
  }
  s.n_instances = static_cast<std::size_t>(get_number(t, "instances", 0));
  s.n_classes = static_cast<int>(get_number(t, "classes", 2));
  s.noise_rate = get_number(t, "noise", 0.0);
  s.overlap = get_number(t, "overlap", 0.0);
  s.seed_offset = static_cast<std::uint64_t>(get_number(t, "seed_offset", 0));
  DriftKind kind = DriftKind::rotation;
  try {
    kind = drift_kind_from_string(get_string(t, "drift_kind", "rotation"));
  } catch (const ConfigError& e) {
    errors.add("dataset " + ds.id + ": " + e.what());
  }
  const int drifts = static_cast<int>(get_number(t, "drifts", 0));
  const double magnitude = get_number(t, "magnitude", 0.5);
  if (drifts > 0 && s.n_instances > 0)
    s.drifts = StreamSpec::even_schedule(s.n_instances, drifts, magnitude, kind);
  try {
    s.validate();
  } catch (const ConfigError& e) {
    errors.add("dataset " + ds.id + ": " + e.what());
  }
  return ds;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_table(const TomlTable& table) {
  Collector errors;
  ExperimentConfig config;

  config.seed = static_cast<std::uint64_t>(get_number(table, "seed", 1));
  config.algorithm = get_string(table, "algorithm", "bdwm");
  if (config.algorithm != "sable" && config.algorithm != "bdwm" && config.algorithm != "bpl")
    errors.add("algorithm must be one of sable, bdwm, bpl");
  config.out_dir = get_string(table, "out", "out");
  if (config.out_dir.empty()) errors.add("out directory must not be empty");

  config.q_folds = static_cast<int>(get_number(table, "q", 10));
  if (config.q_folds < 2) errors.add("q must be >= 2");
  config.r_steps = static_cast<int>(get_number(table, "r", 1));
  if (config.r_steps < 1) errors.add("r must be >= 1");
  config.test_multiplier = static_cast<int>(get_number(table, "test_multiplier", 100));
  if (config.test_multiplier < 0) errors.add("test_multiplier must be >= 0");

  if (table.has("strategies")) {
    for (const auto& v : table.values.at("strategies").as_array()) {
      try {
        config.strategies.push_back(v.as_string());
        parse_strategy(v.as_string(), std::max(config.q_folds, 2),
                       std::max(config.r_steps, 1));
      } catch (const ConfigError& e) {
        errors.add(e.what());
      }
    }
  }
  if (config.strategies.empty()) errors.add("at least one strategy is required");

  if (table.has("batch_sizes")) {
    for (const auto& v : table.values.at("batch_sizes").as_array()) {
      const int n = static_cast<int>(v.as_number());
      if (n < 1) errors.add("batch sizes must be >= 1");
      config.batch_sizes.push_back(n);
    }
  }
  if (config.batch_sizes.empty()) errors.add("at least one batch size is required");

  if (table.tables.count("hyper")) {
    const TomlTable& h = table.tables.at("hyper");
    HyperParams& hp = config.hyper;
    hp.sigma = get_number(h, "sigma", hp.sigma);
    hp.lambda = get_number(h, "lambda", hp.lambda);
    hp.delta0 = get_number(h, "delta0", hp.delta0);
    hp.delta1 = get_number(h, "delta1", hp.delta1);
    hp.latents = static_cast<int>(get_number(h, "latents", hp.latents));
    hp.alpha = get_number(h, "alpha", hp.alpha);
    hp.eta = get_number(h, "eta", hp.eta);
    hp.theta = static_cast<int>(get_number(h, "theta", hp.theta));
    if (std::abs(hp.delta0 + hp.delta1 - 1.0) > 1e-12)
      errors.add("hyper: delta0 + delta1 must equal 1");
    if (hp.sigma <= 0) errors.add("hyper: sigma must be positive");
    if (!(hp.lambda > 0 && hp.lambda <= 1)) errors.add("hyper: lambda must be in (0, 1]");
    if (!(hp.eta > 0 && hp.eta < 1)) errors.add("hyper: eta must be in (0, 1)");
    if (hp.theta < 0) errors.add("hyper: theta must be >= 0");
    if (hp.latents < 1) errors.add("hyper: latents must be >= 1");
    if (!(hp.alpha > 0 && hp.alpha < 1)) errors.add("hyper: alpha must be in (0, 1)");
  }

  if (table.values.count("include_builtin_suite") &&
      table.values.at("include_builtin_suite").as_bool()) {
    for (const auto& spec : builtin_synthetic_suite()) {
      DatasetSpec ds;
      ds.id = spec.id;
      ds.source = DatasetSource::builtin;
      ds.stream = spec;
      config.datasets.push_back(std::move(ds));
    }
  }
  if (table.table_arrays.count("dataset")) {
    for (const auto& t : table.table_arrays.at("dataset"))
      config.datasets.push_back(parse_dataset(t, errors));
  }
  if (config.datasets.empty()) errors.add("at least one dataset is required");

  std::set<std::string> seen, reported;
  for (const auto& ds : config.datasets) {
    if (!seen.insert(ds.id).second && reported.insert(ds.id).second)
      errors.add("duplicate dataset id: " + ds.id);
  }

  for (const auto& ds : config.datasets) {
    const TaskKind task = ds.task();
    if (config.algorithm == "sable" && task != TaskKind::regression)
      errors.add("dataset " + ds.id + ": sable requires regression data");
    if (config.algorithm != "sable" && task != TaskKind::classification)
      errors.add("dataset " + ds.id + ": " + config.algorithm +
                 " requires classification data");
  }

  for (const auto& name : config.strategies) {
    try {
      const StrategySpec spec = parse_strategy(name, std::max(config.q_folds, 2),
                                               std::max(config.r_steps, 1));
      if (spec.kind == StrategyKind::custom && config.algorithm == "sable")
        errors.add("strategy " + name + ": sable provides no custom strategy");
      if (spec.kind == StrategyKind::joint && config.algorithm == "bpl")
        errors.add("strategy " + name + ": bpl does not support the Joint strategy");
      if (spec.kind == StrategyKind::sequence) {
        const int max_am = config.algorithm == "sable" ? 4 : (config.algorithm == "bdwm" ? 7 : 2);
        if (spec.sequence_am > max_am)
          errors.add("strategy " + name + ": mechanism id out of range for " +
                     config.algorithm);
      }
    } catch (const ConfigError&) {
      // already collected above
    }
  }

  if (!errors.ok()) errors.raise();
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return from_table(parse_toml_file(path));
}

}  // namespace adapt
