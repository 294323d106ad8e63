#include "adaptstream/csv.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace adapt {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& text, double& value) {
  try {
    std::size_t consumed = 0;
    value = std::stod(text, &consumed);
    while (consumed < text.size() && std::isspace(static_cast<unsigned char>(text[consumed])))
      ++consumed;
    return consumed == text.size() && std::isfinite(value);
  } catch (const std::exception&) {
    return false;
  }
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

CsvData load_csv_stream(const std::string& path, const CsvSchema& schema) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open CSV file: " + path);

  CsvData data;
  data.task = schema.task;

  std::string line;
  if (!std::getline(file, line)) throw ConfigError("CSV file is empty: " + path);
  const std::size_t n_columns = split_fields(line).size();
  if (n_columns < 2) throw ConfigError("CSV needs at least one feature and a target column");
  const std::size_t n_features = n_columns - 1;

  std::vector<std::vector<double>> feature_rows;
  std::vector<double> targets;
  std::map<std::string, int> label_ids;

  int line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != n_columns) {
      data.rejected.emplace_back(line_no, "expected " + std::to_string(n_columns) +
                                              " fields, got " + std::to_string(fields.size()));
      continue;
    }
    std::vector<double> row(n_features);
    bool ok = true;
    for (std::size_t c = 0; c < n_features; ++c) {
      if (!parse_double(trim(fields[c]), row[c])) {
        data.rejected.emplace_back(line_no, "non-numeric feature in column " +
                                                std::to_string(c + 1));
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    const std::string raw_label = trim(fields[n_features]);
    double target = 0.0;
    if (schema.task == TaskKind::regression) {
      if (!parse_double(raw_label, target)) {
        data.rejected.emplace_back(line_no, "non-numeric regression target");
        continue;
      }
    } else {
      auto it = label_ids.find(raw_label);
      if (it == label_ids.end()) {
        it = label_ids.emplace(raw_label, static_cast<int>(data.label_names.size())).first;
        data.label_names.push_back(raw_label);
      }
      target = it->second;
    }
    feature_rows.push_back(std::move(row));
    targets.push_back(target);
  }

  if (feature_rows.empty()) throw ConfigError("CSV contains no valid data rows: " + path);

  data.inputs.resize(static_cast<Eigen::Index>(feature_rows.size()),
                     static_cast<Eigen::Index>(n_features));
  data.targets.resize(static_cast<Eigen::Index>(targets.size()));
  for (std::size_t r = 0; r < feature_rows.size(); ++r) {
    for (std::size_t c = 0; c < n_features; ++c)
      data.inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          feature_rows[r][c];
    data.targets(static_cast<Eigen::Index>(r)) = targets[r];
  }
  data.n_classes = static_cast<int>(data.label_names.size());
  return data;
}

}  // namespace adapt
