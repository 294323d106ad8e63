#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adapt {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct MechanismError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line;
  ParseError(const std::string& msg, int line_no)
      : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

enum class TaskKind { regression, classification };

std::string to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& s);

/// One batch V_k = {X_k, y_k}. Targets hold real values for regression and
/// integral class ids (0..J-1) for classification.
struct LabeledBatch {
  MatrixXd inputs;   // n_k x M
  VectorXd targets;  // n_k
  int index = 0;     // batch number k

  Eigen::Index rows() const { return inputs.rows(); }
  Eigen::Index cols() const { return inputs.cols(); }
};

/// Throws unless the batch satisfies the type invariants: nonempty, matching
/// row counts, finite features, and (for classification) ids in 0..J-1.
void validate_batch(const LabeledBatch& batch, TaskKind task, int n_classes);

/// Sub-batch with the given rows, keeping the batch index.
LabeledBatch take_rows(const LabeledBatch& batch, const std::vector<Eigen::Index>& rows);

void warn(const std::string& message);

/// Deterministic PRNG. The uniform/normal transforms are done by hand so the
/// byte stream depends only on the seed, not on the standard library build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {  // [0, n)
    return static_cast<int>(uniform() * n) % n;
  }

  double normal();

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);
  static std::uint64_t derive(std::uint64_t seed, std::string_view tag);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace adapt
