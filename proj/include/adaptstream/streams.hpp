#pragma once

// Synthetic concept-drift generators (rotating hyperplane and moving Gaussian
// clusters), label-noise injection, batching, and per-batch test-set
// multiplication. Everything is a pure function of (spec, seed).
//
// Geometry conventions (magnitudes are fractions of a canonical full drift):
//   rotation  - the hyperplane boundary rotates by magnitude * 180 degrees.
//   switching - class means rotate about their centroid by magnitude * 180
//               degrees, so a 100% switch exchanges opposite means.
//   passing   - paired means translate along their connecting line by
//               magnitude * initial distance, moving through each other;
//               a 100% pass leaves the pair exchanged.
//   move      - all means translate together by magnitude * the canonical
//               mean separation in a seeded random direction.
// The gaussian `overlap` parameter is the overlapping coefficient of two
// adjacent unit-variance classes; separation solves 2 Phi(-d/2) = overlap.

#include "adaptstream/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adapt {

enum class StreamFamily { hyperplane, gaussian };
enum class DriftKind { rotation, switching, passing, move };

std::string to_string(StreamFamily family);
std::string to_string(DriftKind kind);
StreamFamily stream_family_from_string(const std::string& s);
DriftKind drift_kind_from_string(const std::string& s);

struct DriftEvent {
  std::size_t at_instance = 0;  // first instance drawn from the shifted concept
  double magnitude = 0.0;       // fraction of the canonical full drift, in (0, 1]
  DriftKind kind = DriftKind::rotation;
};

struct StreamSpec {
  std::string id;
  StreamFamily family = StreamFamily::hyperplane;
  std::size_t n_instances = 0;
  int n_classes = 2;
  std::vector<DriftEvent> drifts;  // strictly increasing instance indices
  double noise_rate = 0.0;
  double overlap = 0.0;  // gaussian families only
  std::uint64_t seed_offset = 0;

  void validate() const;
  /// Events spread evenly: `count` drifts split the stream into count+1
  /// equal-length segments.
  static std::vector<DriftEvent> even_schedule(std::size_t n, int count, double magnitude,
                                               DriftKind kind);
};

/// Frozen concept parameters for one stationary segment.
struct ConceptSnapshot {
  double boundary_angle = 0.0;                 // hyperplane
  std::vector<Eigen::Vector2d> class_means;    // gaussian
};

struct RawStream {
  StreamSpec spec;
  MatrixXd inputs;   // n x 2
  VectorXd targets;  // class ids
  std::vector<std::size_t> segment_starts;  // one per concept, first is 0
  std::vector<ConceptSnapshot> segments;

  std::size_t concept_at(std::size_t row) const;
};

RawStream gen_hyperplane_stream(const StreamSpec& spec, std::uint64_t seed);
RawStream gen_gaussian_stream(const StreamSpec& spec, std::uint64_t seed);
RawStream gen_stream(const StreamSpec& spec, std::uint64_t seed);

/// Replace each training label by a uniform class draw with the given
/// probability (the draw may repeat the original label).
void inject_label_noise(RawStream& stream, double rate, std::uint64_t seed);

struct GeneratedStream {
  TaskKind task = TaskKind::classification;
  int n_classes = 2;
  std::vector<LabeledBatch> batches;
  std::vector<int> concept_ids;      // concept of each batch's first row
  std::vector<MatrixXd> test_inputs;   // empty when test_multiplier == 0
  std::vector<VectorXd> test_targets;
};

/// Cut the stream into consecutive batches of n rows. A final partial batch
/// is kept only when it has at least min_tail rows, otherwise it merges into
/// the previous batch. With test_multiplier > 0 each batch gets multiplier *
/// rows test instances drawn from the concept of the matching training rows.
GeneratedStream batchify(const RawStream& stream, std::size_t n, std::size_t min_tail,
                         int test_multiplier, std::uint64_t test_seed);

/// The 26 built-in synthetic dataset shapes (ids synth01..synth26).
std::vector<StreamSpec> builtin_synthetic_suite();

}  // namespace adapt
