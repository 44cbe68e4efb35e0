#include "surftopo/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <thread>

#include "json.hpp"
#include "surftopo/errors.hpp"
#include "surftopo/file_util.hpp"
#include "surftopo/surface_io.hpp"

namespace surftopo {

namespace {

using json = nlohmann::ordered_json;

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr std::size_t kMaxSamples = 10'000'000;

struct NameEntry {
  const char* name;
  Parameter parameter;
};

constexpr NameEntry kNames[] = {
    {"v_c", Parameter::kCuttingSpeed},      {"n_rpm", Parameter::kSpindleSpeed},
    {"f_z", Parameter::kFeedPerTooth},      {"a_p", Parameter::kDepthOfCut},
    {"dd", Parameter::kGridSpacing},        {"gamma_f", Parameter::kRadialRake},
    {"gamma_p", Parameter::kAxialRake},     {"eps_r", Parameter::kRadialRunout},
    {"eps_a", Parameter::kAxialRunout},     {"phi", Parameter::kPhase},
};

const char* base_name(Parameter p) {
  for (const auto& e : kNames)
    if (e.parameter == p) return e.name;
  return "?";
}

bool is_runout(Parameter p) {
  return p == Parameter::kRadialRunout || p == Parameter::kAxialRunout;
}

std::string range_path(std::size_t k) { return "ranges[" + std::to_string(k) + "]"; }

// Unbiased integer in [0, bound) by rejection on the raw 64-bit output.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

double unit_u53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

json metrics_object(const ArealMetrics& m) {
  json out = {{"sa", m.sa}, {"sq", m.sq}, {"sp", m.sp}, {"sv", m.sv}, {"sz", m.sz}};
  out["ssk"] = m.ssk ? json(*m.ssk) : json(nullptr);
  out["sku"] = m.sku ? json(*m.sku) : json(nullptr);
  out["cell_count"] = m.cell_count;
  return out;
}

std::string sample_file(std::size_t index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "surfaces/sample_%06zu.srtf", index);
  return buf;
}

}  // namespace

std::string ParameterRange::name() const {
  std::string out = base_name(parameter);
  if (is_runout(parameter)) out += "[" + std::to_string(tooth) + "]";
  return out;
}

Parameter parameter_from_name(std::string_view name) {
  for (const auto& e : kNames)
    if (name == e.name) return e.parameter;
  throw ConfigError("ranges", "unknown parameter '" + std::string(name) + "'");
}

void validate_ranges(const std::vector<ParameterRange>& ranges, const ConfigDocument& base) {
  if (ranges.empty()) throw ConfigError("ranges", "at least one range is required");
  std::set<std::pair<Parameter, int>> seen;
  bool has_vc = false, has_n = false;
  double max_rake = std::abs(base.tool.radial_rake);
  for (const auto& r : ranges)
    if (r.parameter == Parameter::kRadialRake)
      max_rake = std::max(std::abs(r.lower), std::abs(r.upper)) * kDegToRad;

  const double R = base.tool.insert_radius;
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const auto& r = ranges[k];
    const std::string path = range_path(k);
    if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || !(r.lower < r.upper))
      throw ConfigError(path, "bounds must be finite with lower < upper");
    if (!seen.insert({r.parameter, is_runout(r.parameter) ? r.tooth : 0}).second)
      throw ConfigError(path, "duplicate range for " + r.name());
    switch (r.parameter) {
      case Parameter::kCuttingSpeed:
        has_vc = true;
        if (!(r.lower > 0.0)) throw ConfigError(path, "v_c must be positive");
        break;
      case Parameter::kSpindleSpeed:
        has_n = true;
        if (!(r.lower > 0.0)) throw ConfigError(path, "n_rpm must be positive");
        break;
      case Parameter::kFeedPerTooth:
        if (!(r.lower > 0.0)) throw ConfigError(path, "f_z must be positive");
        if (r.upper / (2.0 * std::cos(max_rake)) > R)
          throw ConfigError(path, "f_z upper bound exceeds the insert diameter");
        break;
      case Parameter::kDepthOfCut:
        if (!(r.lower > 0.0)) throw ConfigError(path, "a_p must be positive");
        if (r.upper > R) throw ConfigError(path, "a_p upper bound exceeds the insert radius");
        break;
      case Parameter::kGridSpacing: {
        if (!(r.lower > 0.0)) throw ConfigError(path, "dd must be positive");
        const double nodes = (std::round((base.grid.x_max - base.grid.x_min) / r.lower) + 1.0) *
                             (std::round((base.grid.y_max - base.grid.y_min) / r.lower) + 1.0);
        if (nodes > 2.5e8) throw ConfigError(path, "dd lower bound gives more than 2.5e8 nodes");
        if (r.upper > std::min(base.grid.x_max - base.grid.x_min, base.grid.y_max - base.grid.y_min))
          throw ConfigError(path, "dd upper bound exceeds the grid extent");
        break;
      }
      case Parameter::kRadialRake:
      case Parameter::kAxialRake:
        if (!(std::abs(r.lower) < 90.0 && std::abs(r.upper) < 90.0))
          throw ConfigError(path, "rake bounds must lie strictly between -90 and 90 degrees");
        break;
      case Parameter::kRadialRunout:
      case Parameter::kAxialRunout:
        if (r.tooth < 1 || r.tooth > base.tool.tooth_count)
          throw ConfigError(path + ".tooth", "tooth must lie in [1, " +
                                                 std::to_string(base.tool.tooth_count) + "]");
        if (!(std::abs(r.lower) < R && std::abs(r.upper) < R))
          throw ConfigError(path, "run-out bounds must be smaller than the insert radius");
        break;
      case Parameter::kPhase:
        break;
    }
  }
  if (has_vc && has_n) throw ConfigError("ranges", "sample either v_c or n_rpm, not both");
}

std::vector<std::vector<double>> lhs_sample(const std::vector<ParameterRange>& ranges,
                                            std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("count", "sample count must be at least 1");
  if (count > kMaxSamples) throw ConfigError("count", "sample count exceeds 1e7");
  if (ranges.empty()) throw ConfigError("ranges", "at least one range is required");
  for (std::size_t k = 0; k < ranges.size(); ++k)
    if (!std::isfinite(ranges[k].lower) || !std::isfinite(ranges[k].upper) ||
        !(ranges[k].lower < ranges[k].upper))
      throw ConfigError(range_path(k), "bounds must be finite with lower < upper");

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> samples(count, std::vector<double>(ranges.size()));
  std::vector<std::size_t> strata(count);
  const double n = static_cast<double>(count);
  for (std::size_t d = 0; d < ranges.size(); ++d) {
    for (std::size_t s = 0; s < count; ++s) strata[s] = s;
    for (std::size_t k = count - 1; k > 0; --k) std::swap(strata[k], strata[bounded(rng, k + 1)]);
    const double lo = ranges[d].lower, width = ranges[d].upper - ranges[d].lower;
    for (std::size_t s = 0; s < count; ++s) {
      const double u = unit_u53(rng);
      double x = lo + width * ((static_cast<double>(strata[s]) + u) / n);
      if (x >= ranges[d].upper) x = std::nextafter(ranges[d].upper, lo);
      samples[s][d] = x;
    }
  }
  return samples;
}

ConfigDocument apply_sample(const ConfigDocument& base, const std::vector<ParameterRange>& ranges,
                            const std::vector<double>& values) {
  if (values.size() != ranges.size())
    throw DomainError("parameter vector does not match the ranges");
  ConfigDocument doc = base;
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const double v = values[k];
    const auto& r = ranges[k];
    switch (r.parameter) {
      case Parameter::kCuttingSpeed:
        doc.process.spindle_speed = 1000.0 * v / (std::numbers::pi * doc.tool.cutting_diameter);
        break;
      case Parameter::kSpindleSpeed:
        doc.process.spindle_speed = v;
        break;
      case Parameter::kFeedPerTooth:
        doc.process.feed_per_tooth = v;
        break;
      case Parameter::kDepthOfCut:
        doc.process.depth_of_cut = v;
        break;
      case Parameter::kGridSpacing:
        doc.grid = GridSpec::from_extents(v, base.grid.x_min, base.grid.x_max, base.grid.y_min,
                                          base.grid.y_max);
        break;
      case Parameter::kRadialRake:
        doc.tool.radial_rake = v * kDegToRad;
        break;
      case Parameter::kAxialRake:
        doc.tool.axial_rake = v * kDegToRad;
        break;
      case Parameter::kRadialRunout:
        doc.tool.runouts.at(static_cast<std::size_t>(r.tooth - 1)).radial = v;
        break;
      case Parameter::kAxialRunout:
        doc.tool.runouts.at(static_cast<std::size_t>(r.tooth - 1)).axial = v;
        break;
      case Parameter::kPhase:
        doc.process.phase = v * kDegToRad;
        break;
    }
  }
  resolve_derived(doc);
  return doc;
}

DatasetSpec parse_dataset_config(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "expected an object");
  static const std::set<std::string> allowed{"base_config", "ranges", "count",
                                             "seed",        "workers", "roi"};
  for (const auto& item : root.items())
    if (!allowed.contains(item.key())) throw ConfigError(item.key(), "unknown key");

  DatasetSpec spec;
  if (!root.contains("base_config")) throw ConfigError("base_config", "missing required field");
  const json& base = root.at("base_config");
  try {
    if (base.is_string()) {
      std::filesystem::path p = base.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      spec.base = load_config(p);
    } else if (base.is_object()) {
      spec.base = parse_config(base.dump());
    } else {
      throw ConfigError("base_config", "expected a path or an object");
    }
  } catch (const ConfigError& e) {
    if (e.path() == "base_config") throw;
    throw ConfigError(e.path().empty() ? "base_config" : "base_config." + e.path(), e.message());
  }

  if (!root.contains("ranges") || !root.at("ranges").is_array())
    throw ConfigError("ranges", "expected an array of ranges");
  const json& list = root.at("ranges");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string path = range_path(k);
    const json& item = list[k];
    if (!item.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& field : item.items())
      if (field.key() != "name" && field.key() != "tooth" && field.key() != "lower" &&
          field.key() != "upper" && field.key() != "magnitude")
        throw ConfigError(path + "." + field.key(), "unknown key");
    if (!item.contains("name") || !item.at("name").is_string())
      throw ConfigError(path + ".name", "expected a parameter name");
    ParameterRange r;
    try {
      r.parameter = parameter_from_name(item.at("name").get<std::string>());
    } catch (const ConfigError&) {
      throw ConfigError(path + ".name",
                        "unknown parameter '" + item.at("name").get<std::string>() + "'");
    }
    if (is_runout(r.parameter)) {
      if (!item.contains("tooth") || !item.at("tooth").is_number_integer())
        throw ConfigError(path + ".tooth", "run-out ranges need an integer tooth");
      r.tooth = item.at("tooth").get<int>();
    } else if (item.contains("tooth")) {
      throw ConfigError(path + ".tooth", "only run-out ranges take a tooth");
    }
    if (item.contains("magnitude")) {
      if (!is_runout(r.parameter))
        throw ConfigError(path + ".magnitude", "only run-out ranges take a magnitude");
      if (item.contains("lower") || item.contains("upper"))
        throw ConfigError(path + ".magnitude", "give either magnitude or lower/upper");
      const double m = number_at(item.at("magnitude"), path + ".magnitude");
      if (!(m > 0.0)) throw ConfigError(path + ".magnitude", "must be positive");
      r.lower = -m;
      r.upper = m;
    } else {
      if (!item.contains("lower")) throw ConfigError(path + ".lower", "missing required field");
      if (!item.contains("upper")) throw ConfigError(path + ".upper", "missing required field");
      r.lower = number_at(item.at("lower"), path + ".lower");
      r.upper = number_at(item.at("upper"), path + ".upper");
    }
    spec.ranges.push_back(r);
  }
  validate_ranges(spec.ranges, spec.base);

  if (root.contains("count")) {
    if (!root.at("count").is_number_unsigned()) throw ConfigError("count", "expected a positive integer");
    const auto c = root.at("count").get<std::uint64_t>();
    if (c < 1 || c > kMaxSamples) throw ConfigError("count", "must lie in [1, 1e7]");
    spec.count = static_cast<std::size_t>(c);
  }
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected an unsigned integer");
    spec.seed = root.at("seed").get<std::uint64_t>();
  }
  if (root.contains("workers")) {
    if (!root.at("workers").is_number_unsigned()) throw ConfigError("workers", "expected an integer");
    const auto w = root.at("workers").get<std::uint64_t>();
    if (w < 1 || w > 1024) throw ConfigError("workers", "must lie in [1, 1024]");
    spec.workers = static_cast<unsigned>(w);
  }
  if (root.contains("roi")) {
    const json& v = root.at("roi");
    if (!v.is_array() || v.size() != 4) throw ConfigError("roi", "expected [x0, y0, x1, y1]");
    std::array<double, 4> roi{};
    for (std::size_t k = 0; k < 4; ++k)
      roi[k] = number_at(v[k], "roi[" + std::to_string(k) + "]");
    if (!(roi[2] > roi[0] && roi[3] > roi[1])) throw ConfigError("roi", "must be increasing");
    spec.roi = roi;
  }
  return spec;
}

std::string manifest_jsonl(const DatasetManifest& manifest) {
  std::string out;
  for (const auto& row : manifest.rows) {
    json line;
    line["schema_version"] = manifest.schema_version;
    line["rng"] = manifest.rng;
    line["seed"] = manifest.seed;
    line["sample_count"] = manifest.sample_count;
    line["index"] = row.index;
    line["status"] = row.failed ? "failed" : "ok";
    if (row.failed) line["error"] = row.error;
    json params = json::object();
    for (std::size_t k = 0; k < row.parameters.size() && k < manifest.parameter_names.size(); ++k)
      params[manifest.parameter_names[k]] = row.parameters[k];
    line["parameters"] = params;
    line["surface"] = row.failed ? json(nullptr) : json(row.surface_path);
    if (row.metrics) line["metrics"] = metrics_object(*row.metrics);
    else line["metrics"] = nullptr;
    if (!row.metrics_error.empty()) line["metrics_error"] = row.metrics_error;
    line["counters"] = {{"time_steps", row.counters.time_steps},
                        {"trajectory_points", row.counters.trajectory_points},
                        {"cells_machined", row.counters.cells_machined}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

DatasetManifest generate_dataset(const DatasetSpec& spec, std::size_t count, std::uint64_t seed,
                                 const std::filesystem::path& out_dir) {
  validate_ranges(spec.ranges, spec.base);
  const auto samples = lhs_sample(spec.ranges, count, seed);

  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.sample_count = count;
  for (const auto& r : spec.ranges) manifest.parameter_names.push_back(r.name());

  ensure_directory(out_dir / "surfaces");

  std::vector<std::optional<ManifestRow>> rows(count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex error_mutex;
  std::optional<IoError> io_failure;

  const auto run_one = [&](std::size_t index) {
    ManifestRow row;
    row.index = index;
    row.parameters = samples[index];
    row.surface_path = sample_file(index);
    SimulationResult result;
    try {
      ConfigDocument doc = apply_sample(spec.base, spec.ranges, samples[index]);
      doc.engine.workers = 1;
      doc.engine.record_trajectory = false;
      result = simulate(to_simulation_config(doc));
      row.counters = result.counters;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      return row;
    }
    try {
      const GridSpec& grid = result.field.spec();
      const CellRange roi = spec.roi ? range_from_extents(grid, (*spec.roi)[0], (*spec.roi)[1],
                                                          (*spec.roi)[2], (*spec.roi)[3])
                                     : full_range(grid);
      row.metrics = areal_metrics(result.field, roi);
    } catch (const DomainError& e) {
      row.metrics_error = e.what();
    }
    write_surface(result.field, out_dir / row.surface_path);
    return row;
  };

  const auto worker = [&] {
    while (!abort.load()) {
      const std::size_t index = next.fetch_add(1);
      if (index >= count) return;
      try {
        rows[index] = run_one(index);
      } catch (const IoError& e) {
        std::lock_guard lock(error_mutex);
        if (!io_failure) io_failure = e;
        abort = true;
      }
    }
  };

  unsigned workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  for (auto& row : rows)
    if (row) manifest.rows.push_back(std::move(*row));
  write_file_atomic(out_dir / "manifest.jsonl", manifest_jsonl(manifest));
  if (io_failure) throw *io_failure;
  return manifest;
}

}  // namespace surftopo
