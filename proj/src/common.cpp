#include "adaptstream/common.hpp"

#include <cmath>
#include <iostream>
#include <mutex>

namespace adapt {

std::string to_string(TaskKind kind) {
  return kind == TaskKind::regression ? "regression" : "classification";
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "regression") return TaskKind::regression;
  if (s == "classification") return TaskKind::classification;
  throw ConfigError("unknown task kind: " + s);
}

void validate_batch(const LabeledBatch& batch, TaskKind task, int n_classes) {
  if (batch.inputs.rows() < 1) throw DimensionError("batch must contain at least one row");
  if (batch.inputs.rows() != batch.targets.size())
    throw DimensionError("batch inputs/targets row mismatch");
  if (!batch.inputs.allFinite()) throw DimensionError("batch contains non-finite feature values");
  if (task == TaskKind::classification) {
    for (Eigen::Index i = 0; i < batch.targets.size(); ++i) {
      double y = batch.targets(i);
      if (y != std::floor(y) || y < 0 || y >= n_classes)
        throw DimensionError("class id out of range at row " + std::to_string(i));
    }
  } else if (!batch.targets.allFinite()) {
    throw DimensionError("batch contains non-finite targets");
  }
}

LabeledBatch take_rows(const LabeledBatch& batch, const std::vector<Eigen::Index>& rows) {
  LabeledBatch out;
  out.index = batch.index;
  out.inputs.resize(static_cast<Eigen::Index>(rows.size()), batch.inputs.cols());
  out.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.inputs.row(static_cast<Eigen::Index>(i)) = batch.inputs.row(rows[i]);
    out.targets(static_cast<Eigen::Index>(i)) = batch.targets(rows[i]);
  }
  return out;
}

void warn(const std::string& message) {
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  std::cerr << "[warn] " << message << "\n";
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 pushed away from 0 so log stays finite.
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

std::uint64_t Rng::derive(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return derive(seed, h);
}

}  // namespace adapt
