#include "adaptstream/streams.hpp"

#include "adaptstream/stats_util.hpp"

#include <algorithm>
#include <cmath>

namespace adapt {

std::string to_string(StreamFamily family) {
  return family == StreamFamily::hyperplane ? "hyperplane" : "gaussian";
}

std::string to_string(DriftKind kind) {
  switch (kind) {
    case DriftKind::rotation: return "rotation";
    case DriftKind::switching: return "switching";
    case DriftKind::passing: return "passing";
    case DriftKind::move: return "move";
  }
  return "rotation";
}

StreamFamily stream_family_from_string(const std::string& s) {
  if (s == "hyperplane") return StreamFamily::hyperplane;
  if (s == "gaussian") return StreamFamily::gaussian;
  throw ConfigError("unknown stream family: " + s);
}

DriftKind drift_kind_from_string(const std::string& s) {
  if (s == "rotation") return DriftKind::rotation;
  if (s == "switching") return DriftKind::switching;
  if (s == "passing") return DriftKind::passing;
  if (s == "move") return DriftKind::move;
  throw ConfigError("unknown drift kind: " + s);
}

void StreamSpec::validate() const {
  if (n_instances < 2) throw ConfigError("stream spec needs at least two instances");
  if (n_classes != 2 && n_classes != 4)
    throw ConfigError("stream spec supports 2 or 4 classes");
  if (noise_rate < 0.0 || noise_rate >= 1.0)
    throw ConfigError("noise rate must be in [0, 1)");
  std::size_t prev = 0;
  bool first = true;
  for (const auto& d : drifts) {
    if (!first && d.at_instance <= prev)
      throw ConfigError("drift indices must be strictly increasing");
    if (d.at_instance == 0 || d.at_instance >= n_instances)
      throw ConfigError("drift index out of range");
    if (!(d.magnitude > 0.0 && d.magnitude <= 1.0))
      throw ConfigError("drift magnitude must be in (0, 1]");
    prev = d.at_instance;
    first = false;
  }
  if (family == StreamFamily::gaussian && !(overlap >= 0.0 && overlap < 1.0))
    throw ConfigError("gaussian overlap must be in [0, 1)");
}

std::vector<DriftEvent> StreamSpec::even_schedule(std::size_t n, int count, double magnitude,
                                                  DriftKind kind) {
  std::vector<DriftEvent> events;
  const std::size_t segment = n / (static_cast<std::size_t>(count) + 1);
  for (int i = 1; i <= count; ++i)
    events.push_back(DriftEvent{segment * static_cast<std::size_t>(i), magnitude, kind});
  return events;
}

std::size_t RawStream::concept_at(std::size_t row) const {
  std::size_t id = 0;
  while (id + 1 < segment_starts.size() && row >= segment_starts[id + 1]) ++id;
  return id;
}

namespace {

int hyperplane_label(const Eigen::Vector2d& point, double angle, int n_classes) {
  const Eigen::Vector2d centered = point - Eigen::Vector2d(0.5, 0.5);
  if (n_classes == 2) {
    const Eigen::Vector2d normal(-std::sin(angle), std::cos(angle));
    return normal.dot(centered) >= 0.0 ? 1 : 0;
  }
  double theta = std::atan2(centered.y(), centered.x()) - angle;
  theta = std::fmod(theta, 2.0 * M_PI);
  if (theta < 0.0) theta += 2.0 * M_PI;
  return std::min(3, static_cast<int>(theta / (M_PI / 2.0)));
}

/// Separation of adjacent class means solving 2 Phi(-d/2) = overlap for
/// unit-variance components; overlap 0 falls back to a wide split.
double gaussian_separation(double overlap) {
  if (overlap <= 0.0) return 10.0;
  return -2.0 * normal_quantile(overlap / 2.0);
}

std::vector<Eigen::Vector2d> initial_means(int n_classes, double separation) {
  if (n_classes == 2)
    return {Eigen::Vector2d(-separation / 2.0, 0.0), Eigen::Vector2d(separation / 2.0, 0.0)};
  const double h = separation / 2.0;
  return {Eigen::Vector2d(-h, -h), Eigen::Vector2d(h, -h), Eigen::Vector2d(-h, h),
          Eigen::Vector2d(h, h)};
}

std::vector<Eigen::Vector2d> apply_gaussian_drift(const std::vector<Eigen::Vector2d>& means,
                                                  const DriftEvent& event, double separation,
                                                  Rng& rng) {
  std::vector<Eigen::Vector2d> out = means;
  switch (event.kind) {
    case DriftKind::switching: {
      Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
      for (const auto& m : means) centroid += m;
      centroid /= static_cast<double>(means.size());
      const double angle = event.magnitude * M_PI;
      const Eigen::Rotation2D<double> rot(angle);
      for (std::size_t i = 0; i < means.size(); ++i)
        out[i] = centroid + rot * (means[i] - centroid);
      break;
    }
    case DriftKind::passing: {
      // Pairs (0,1), (2,3) translate along their current connecting line.
      for (std::size_t i = 0; i + 1 < means.size(); i += 2) {
        Eigen::Vector2d axis = means[i + 1] - means[i];
        const double distance = axis.norm();
        if (distance < 1e-12) axis = Eigen::Vector2d(1.0, 0.0);
        else axis /= distance;
        const double step = event.magnitude * (distance < 1e-12 ? separation : distance);
        out[i] = means[i] + step * axis;
        out[i + 1] = means[i + 1] - step * axis;
      }
      break;
    }
    case DriftKind::move: {
      const double angle = rng.uniform(0.0, 2.0 * M_PI);
      const Eigen::Vector2d shift =
          event.magnitude * separation * Eigen::Vector2d(std::cos(angle), std::sin(angle));
      for (auto& m : out) m += shift;
      break;
    }
    case DriftKind::rotation:
      throw ConfigError("rotation drift applies to hyperplane streams only");
  }
  return out;
}

}  // namespace

RawStream gen_hyperplane_stream(const StreamSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.family != StreamFamily::hyperplane)
    throw ConfigError("gen_hyperplane_stream requires a hyperplane spec");
  for (const auto& d : spec.drifts)
    if (d.kind != DriftKind::rotation)
      throw ConfigError("hyperplane streams support rotation drifts only");

  RawStream stream;
  stream.spec = spec;
  stream.inputs.resize(static_cast<Eigen::Index>(spec.n_instances), 2);
  stream.targets.resize(static_cast<Eigen::Index>(spec.n_instances));

  Rng rng(Rng::derive(seed ^ spec.seed_offset, "hyperplane"));
  double angle = M_PI / 6.0;  // fixed initial boundary orientation
  stream.segment_starts.push_back(0);
  stream.segments.push_back(ConceptSnapshot{angle, {}});

  std::size_t next_drift = 0;
  for (std::size_t i = 0; i < spec.n_instances; ++i) {
    while (next_drift < spec.drifts.size() && spec.drifts[next_drift].at_instance == i) {
      angle += spec.drifts[next_drift].magnitude * M_PI;
      stream.segment_starts.push_back(i);
      stream.segments.push_back(ConceptSnapshot{angle, {}});
      ++next_drift;
    }
    const Eigen::Vector2d point(rng.uniform(), rng.uniform());
    stream.inputs.row(static_cast<Eigen::Index>(i)) = point.transpose();
    stream.targets(static_cast<Eigen::Index>(i)) =
        hyperplane_label(point, angle, spec.n_classes);
  }
  return stream;
}

RawStream gen_gaussian_stream(const StreamSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.family != StreamFamily::gaussian)
    throw ConfigError("gen_gaussian_stream requires a gaussian spec");

  RawStream stream;
  stream.spec = spec;
  stream.inputs.resize(static_cast<Eigen::Index>(spec.n_instances), 2);
  stream.targets.resize(static_cast<Eigen::Index>(spec.n_instances));

  Rng rng(Rng::derive(seed ^ spec.seed_offset, "gaussian"));
  const double separation = gaussian_separation(spec.overlap);
  auto means = initial_means(spec.n_classes, separation);
  stream.segment_starts.push_back(0);
  stream.segments.push_back(ConceptSnapshot{0.0, means});

  std::size_t next_drift = 0;
  for (std::size_t i = 0; i < spec.n_instances; ++i) {
    while (next_drift < spec.drifts.size() && spec.drifts[next_drift].at_instance == i) {
      means = apply_gaussian_drift(means, spec.drifts[next_drift], separation, rng);
      stream.segment_starts.push_back(i);
      stream.segments.push_back(ConceptSnapshot{0.0, means});
      ++next_drift;
    }
    const int label = rng.uniform_int(spec.n_classes);
    const Eigen::Vector2d point =
        means[static_cast<std::size_t>(label)] + Eigen::Vector2d(rng.normal(), rng.normal());
    stream.inputs.row(static_cast<Eigen::Index>(i)) = point.transpose();
    stream.targets(static_cast<Eigen::Index>(i)) = label;
  }
  return stream;
}

RawStream gen_stream(const StreamSpec& spec, std::uint64_t seed) {
  return spec.family == StreamFamily::hyperplane ? gen_hyperplane_stream(spec, seed)
                                                 : gen_gaussian_stream(spec, seed);
}

void inject_label_noise(RawStream& stream, double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate >= 1.0) throw ConfigError("noise rate must be in [0, 1)");
  if (rate == 0.0) return;
  Rng rng(Rng::derive(seed ^ stream.spec.seed_offset, "label-noise"));
  for (Eigen::Index i = 0; i < stream.targets.size(); ++i) {
    if (rng.uniform() < rate)
      stream.targets(i) = rng.uniform_int(stream.spec.n_classes);
  }
}

GeneratedStream batchify(const RawStream& stream, std::size_t n, std::size_t min_tail,
                         int test_multiplier, std::uint64_t test_seed) {
  if (n < 1) throw ConfigError("batch size must be >= 1");
  const auto total = static_cast<std::size_t>(stream.inputs.rows());

  // Batch row ranges: [start, end) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t start = 0; start < total; start += n)
    ranges.emplace_back(start, std::min(start + n, total));
  if (ranges.size() >= 2) {
    auto& tail = ranges.back();
    if (tail.second - tail.first < std::max<std::size_t>(2, min_tail)) {
      ranges[ranges.size() - 2].second = tail.second;
      ranges.pop_back();
    }
  }
  if (ranges.size() < 2) throw ConfigError("stream yields fewer than two batches");

  GeneratedStream out;
  out.task = TaskKind::classification;
  out.n_classes = stream.spec.n_classes;

  Rng test_rng(Rng::derive(test_seed ^ stream.spec.seed_offset, "test-sets"));
  for (std::size_t b = 0; b < ranges.size(); ++b) {
    const auto [start, end] = ranges[b];
    const auto rows = static_cast<Eigen::Index>(end - start);
    LabeledBatch batch;
    batch.index = static_cast<int>(b);
    batch.inputs = stream.inputs.middleRows(static_cast<Eigen::Index>(start), rows);
    batch.targets = stream.targets.segment(static_cast<Eigen::Index>(start), rows);
    out.batches.push_back(std::move(batch));
    out.concept_ids.push_back(static_cast<int>(stream.concept_at(start)));

    if (test_multiplier > 0) {
      const Eigen::Index test_rows = rows * test_multiplier;
      MatrixXd test_x(test_rows, 2);
      VectorXd test_y(test_rows);
      Eigen::Index cursor = 0;
      for (std::size_t row = start; row < end; ++row) {
        const ConceptSnapshot& snapshot = stream.segments[stream.concept_at(row)];
        for (int t = 0; t < test_multiplier; ++t, ++cursor) {
          if (stream.spec.family == StreamFamily::hyperplane) {
            const Eigen::Vector2d point(test_rng.uniform(), test_rng.uniform());
            test_x.row(cursor) = point.transpose();
            test_y(cursor) =
                hyperplane_label(point, snapshot.boundary_angle, stream.spec.n_classes);
          } else {
            const int label = test_rng.uniform_int(stream.spec.n_classes);
            const Eigen::Vector2d point = snapshot.class_means[static_cast<std::size_t>(label)] +
                                          Eigen::Vector2d(test_rng.normal(), test_rng.normal());
            test_x.row(cursor) = point.transpose();
            test_y(cursor) = label;
          }
        }
      }
      out.test_inputs.push_back(std::move(test_x));
      out.test_targets.push_back(std::move(test_y));
    }
  }
  return out;
}

std::vector<StreamSpec> builtin_synthetic_suite() {
  struct Row {
    StreamFamily family;
    std::size_t n;
    int classes;
    int drifts;
    double magnitude;
    DriftKind kind;
    double noise;
    double overlap;
  };
  const std::vector<Row> rows = {
      {StreamFamily::hyperplane, 600, 2, 2, 0.50, DriftKind::rotation, 0.00, 0.0},
      {StreamFamily::hyperplane, 600, 2, 2, 0.50, DriftKind::rotation, 0.10, 0.0},
      {StreamFamily::hyperplane, 600, 2, 9, 0.1111, DriftKind::rotation, 0.00, 0.0},
      {StreamFamily::hyperplane, 600, 2, 9, 0.1111, DriftKind::rotation, 0.10, 0.0},
      {StreamFamily::hyperplane, 640, 2, 15, 0.0667, DriftKind::rotation, 0.00, 0.0},
      {StreamFamily::hyperplane, 640, 2, 15, 0.0667, DriftKind::rotation, 0.10, 0.0},
      {StreamFamily::hyperplane, 1500, 4, 2, 0.50, DriftKind::rotation, 0.00, 0.0},
      {StreamFamily::hyperplane, 1500, 4, 2, 0.50, DriftKind::rotation, 0.10, 0.0},
      {StreamFamily::gaussian, 1155, 2, 4, 0.50, DriftKind::switching, 0.00, 0.25},
      {StreamFamily::gaussian, 1155, 2, 10, 0.20, DriftKind::switching, 0.00, 0.25},
      {StreamFamily::gaussian, 1155, 2, 20, 0.10, DriftKind::switching, 0.00, 0.25},
      {StreamFamily::gaussian, 2805, 2, 4, 0.4987, DriftKind::passing, 0.00, 0.0042},
      {StreamFamily::gaussian, 2805, 2, 6, 0.2734, DriftKind::passing, 0.00, 0.0042},
      {StreamFamily::gaussian, 2805, 2, 32, 0.0987, DriftKind::passing, 0.00, 0.0042},
      {StreamFamily::gaussian, 945, 2, 4, 0.5205, DriftKind::move, 0.00, 0.0004},
      {StreamFamily::gaussian, 945, 2, 4, 0.5205, DriftKind::move, 0.00, 0.1039},
      {StreamFamily::gaussian, 945, 2, 8, 0.2763, DriftKind::move, 0.00, 0.0004},
      {StreamFamily::gaussian, 945, 2, 8, 0.2763, DriftKind::move, 0.00, 0.1039},
      {StreamFamily::gaussian, 945, 2, 20, 0.1125, DriftKind::move, 0.00, 0.0004},
      {StreamFamily::gaussian, 945, 2, 20, 0.1125, DriftKind::move, 0.00, 0.1039},
      {StreamFamily::gaussian, 1890, 4, 4, 0.5205, DriftKind::move, 0.00, 0.00013},
      {StreamFamily::gaussian, 1890, 4, 4, 0.5205, DriftKind::move, 0.00, 0.1024},
      {StreamFamily::gaussian, 1890, 4, 8, 0.2763, DriftKind::move, 0.00, 0.00013},
      {StreamFamily::gaussian, 1890, 4, 8, 0.2763, DriftKind::move, 0.00, 0.1024},
      {StreamFamily::gaussian, 1890, 4, 20, 0.1125, DriftKind::move, 0.00, 0.00013},
      {StreamFamily::gaussian, 1890, 4, 20, 0.1125, DriftKind::move, 0.00, 0.1024},
  };

  std::vector<StreamSpec> specs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    StreamSpec spec;
    char id[16];
    std::snprintf(id, sizeof(id), "synth%02zu", i + 1);
    spec.id = id;
    spec.family = row.family;
    spec.n_instances = row.n;
    spec.n_classes = row.classes;
    spec.drifts = StreamSpec::even_schedule(row.n, row.drifts, row.magnitude, row.kind);
    spec.noise_rate = row.noise;
    spec.overlap = row.overlap;
    spec.seed_offset = i + 1;
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace adapt
