#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surftopo/config.hpp"
#include "surftopo/engine.hpp"
#include "surftopo/roughness.hpp"

namespace surftopo {

/// Sampled quantity and its unit in a range declaration.
enum class Parameter {
  kCuttingSpeed,  // v_c, m/min
  kSpindleSpeed,  // n_rpm, rev/min
  kFeedPerTooth,  // f_z, mm
  kDepthOfCut,    // a_p, mm
  kGridSpacing,   // dd, mm
  kRadialRake,    // gamma_f, deg
  kAxialRake,     // gamma_p, deg
  kRadialRunout,  // eps_r of one tooth, mm
  kAxialRunout,   // eps_a of one tooth, mm
  kPhase,         // phi, deg
};

struct ParameterRange {
  Parameter parameter = Parameter::kFeedPerTooth;
  int tooth = 0;  // run-outs only, 1-based
  double lower = 0.0;
  double upper = 0.0;

  /// "v_c", "f_z", ... ; run-outs as "eps_a[2]".
  std::string name() const;

  bool operator==(const ParameterRange&) const = default;
};

/// Throws ConfigError for unknown names.
Parameter parameter_from_name(std::string_view name);

/// Checks bounds against their own domain and against `base` (a_p <= R,
/// tooth index, feed length, ...). Throws ConfigError.
void validate_ranges(const std::vector<ParameterRange>& ranges, const ConfigDocument& base);

inline constexpr const char* kSamplerRng = "mt19937_64";

/// Latin hypercube sample, count x ranges.size(), in declared units.
///
/// Per dimension, in declaration order, the generator first shuffles the
/// strata 0..count-1 (Fisher-Yates from the top, unbiased bounded draws by
/// rejection) and then draws one 53-bit uniform offset per sample. Sample s
/// of that dimension is lower + (upper - lower) * (stratum[s] + u_s) / count.
std::vector<std::vector<double>> lhs_sample(const std::vector<ParameterRange>& ranges,
                                            std::size_t count, std::uint64_t seed);

/// Base document with one parameter vector applied and derived fields
/// recomputed. Grid spacing changes keep the base extents.
ConfigDocument apply_sample(const ConfigDocument& base, const std::vector<ParameterRange>& ranges,
                            const std::vector<double>& values);

struct DatasetSpec {
  ConfigDocument base;
  std::vector<ParameterRange> ranges;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;  // 0: one per hardware thread
  std::optional<std::array<double, 4>> roi;  // x0, y0, x1, y1 in mm
};

/// Dataset configuration:
///
///   {"base_config": "sim.json" | {...inline simulation config...},
///    "ranges": [{"name": "f_z", "lower": 0.1, "upper": 0.6},
///               {"name": "eps_a", "tooth": 2, "magnitude": 0.01}, ...],
///    "count": 16, "seed": 7, "workers": 4, "roi": [x0, y0, x1, y1]}
///
/// A "magnitude" bound stands for [-magnitude, magnitude]. A relative
/// base_config path is resolved against `base_dir`.
DatasetSpec parse_dataset_config(std::string_view text, const std::filesystem::path& base_dir);

struct ManifestRow {
  std::size_t index = 0;
  std::vector<double> parameters;
  std::string surface_path;  // relative to the dataset directory
  bool failed = false;
  std::string error;
  std::optional<ArealMetrics> metrics;
  std::string metrics_error;
  SimulationCounters counters;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
  std::string rng = kSamplerRng;
  int schema_version = 1;
  std::vector<std::string> parameter_names;
  std::vector<ManifestRow> rows;
};

/// One JSON object per line, ordered by sample index.
std::string manifest_jsonl(const DatasetManifest& manifest);

/// Simulates every sample concurrently, writes surfaces/sample_NNNNNN.srtf
/// and manifest.jsonl under `out_dir`. A failing simulation marks its row
/// failed; a write failure stops the batch, writes the rows finished so far
/// and rethrows.
DatasetManifest generate_dataset(const DatasetSpec& spec, std::size_t count, std::uint64_t seed,
                                 const std::filesystem::path& out_dir);

}  // namespace surftopo
