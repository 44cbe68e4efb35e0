// surftopo command-line front end. Informational messages go to stderr;
// results go to files or stdout.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "surftopo/bench_config.hpp"
#include "surftopo/config.hpp"
#include "surftopo/dataset.hpp"
#include "surftopo/engine.hpp"
#include "surftopo/errors.hpp"
#include "surftopo/export.hpp"
#include "surftopo/file_util.hpp"
#include "surftopo/roughness.hpp"
#include "surftopo/surface_io.hpp"

namespace fs = std::filesystem;
using namespace surftopo;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what, "cannot parse '" + item + "' as a number");
    }
  }
  return out;
}

bool wants(const ConfigDocument& doc, const char* format) {
  if (doc.output.formats.empty()) return std::string(format) != "trajectory" ||
                                         doc.engine.record_trajectory;
  for (const auto& f : doc.output.formats)
    if (f == format) return true;
  return false;
}

int run_simulate(const std::string& config_path, std::string out_dir,
                 std::optional<unsigned> workers, bool trajectory) {
  ConfigDocument doc = load_config(config_path);
  if (workers) {
    if (*workers < 1 || *workers > 1024) throw ConfigError("--workers", "must lie in [1, 1024]");
    doc.engine.workers = *workers;
  }
  if (trajectory) doc.engine.record_trajectory = true;
  if (out_dir.empty()) out_dir = doc.output.directory;
  if (out_dir.empty()) throw ConfigError("--out", "no output directory given");
  const fs::path out = out_dir;

  const SimulationResult result = simulate(to_simulation_config(doc));
  std::fprintf(stderr, "simulated %zu steps, %zu trajectory points, %zu cells machined in %.3f s\n",
               result.counters.time_steps, result.counters.trajectory_points,
               result.counters.cells_machined, result.wall_time_s);

  ensure_directory(out);
  write_file_atomic(out / "config.json", serialize_config(doc));
  if (wants(doc, "srtf")) write_surface(result.field, out / "surface.srtf");

  const CellRange roi = full_range(result.field.spec());
  if (result.counters.cells_machined == 0) {
    std::fprintf(stderr, "warning: no cell was machined; skipping image and metrics exports\n");
  } else {
    if (wants(doc, "csv")) write_file_atomic(out / "heights.csv", heights_csv(result.field, roi));
    if (wants(doc, "pgm")) write_file_atomic(out / "surface.pgm", graymap_p5(result.field, roi));
    if (wants(doc, "metrics")) {
      std::string text;
      try {
        text = metrics_json(areal_metrics(result.field, roi));
      } catch (const DomainError& e) {
        text = nlohmann::json{{"units", "um"}, {"metrics_error", e.what()}}.dump(2) + "\n";
        std::fprintf(stderr, "warning: %s\n", e.what());
      }
      write_file_atomic(out / "metrics.json", text);
    }
  }
  if (result.trajectory && wants(doc, "trajectory"))
    write_file_atomic(out / "trajectory.csv", trajectory_csv(*result.trajectory));

  nlohmann::ordered_json run = {{"time_steps", result.counters.time_steps},
                                {"trajectory_points", result.counters.trajectory_points},
                                {"cells_machined", result.counters.cells_machined},
                                {"time_step_s", result.time_step},
                                {"t_start_s", result.t_start},
                                {"edge_points", result.edge_points}};
  write_file_atomic(out / "run.json", run.dump(2) + "\n");
  std::fprintf(stderr, "wrote results to %s\n", out.c_str());
  return 0;
}

int run_roughness(const std::string& surface_path, const std::string& roi_text,
                  const std::string& profile_text, const std::string& leveling_text,
                  const std::string& format) {
  const HeightField field = read_surface(surface_path);
  CellRange roi = full_range(field.spec());
  if (!roi_text.empty()) {
    const auto v = parse_list(roi_text, "--roi");
    if (v.size() != 4) throw ConfigError("--roi", "expected x0,y0,x1,y1");
    roi = range_from_extents(field.spec(), v[0], v[1], v[2], v[3]);
  }
  Leveling leveling = Leveling::kMean;
  if (leveling_text == "plane") leveling = Leveling::kPlane;
  else if (leveling_text != "mean") throw ConfigError("--leveling", "expected mean or plane");

  const ArealMetrics metrics = areal_metrics(field, roi, leveling);
  std::optional<LineProfile> profile;
  if (!profile_text.empty()) {
    const auto colon = profile_text.find(':');
    const std::string kind = profile_text.substr(0, colon);
    ProfileDirection direction;
    if (kind == "feed") direction = ProfileDirection::kFeed;
    else if (kind == "pickfeed") direction = ProfileDirection::kPickFeed;
    else throw ConfigError("--profile", "expected feed or pickfeed");
    std::optional<std::size_t> index;
    if (colon != std::string::npos) {
      try {
        std::size_t used = 0;
        const std::string digits = profile_text.substr(colon + 1);
        index = std::stoul(digits, &used);
        if (used != digits.size() || digits.empty() || digits[0] == '-')
          throw std::invalid_argument(digits);
      } catch (const std::exception&) {
        throw ConfigError("--profile", "malformed line index");
      }
    }
    profile = extract_profile(field, direction, index, roi);
  }

  if (format == "table") {
    std::cout << metrics_table(metrics);
    if (profile) std::printf("Ra   %24s um\n", format_number(line_roughness(*profile)).c_str());
  } else {
    nlohmann::ordered_json out = nlohmann::ordered_json::parse(metrics_json(metrics));
    if (profile) {
      out["profile"] = {{"direction", profile->direction == ProfileDirection::kFeed ? "feed"
                                                                                     : "pickfeed"},
                        {"index", profile->index},
                        {"samples", profile->heights.size()},
                        {"ra", line_roughness(*profile)}};
    }
    std::cout << out.dump(2) << "\n";
  }
  return 0;
}

int run_dataset(const std::string& config_path, std::optional<std::size_t> samples,
                std::optional<std::uint64_t> seed, const std::string& out_dir,
                std::optional<unsigned> workers) {
  std::string text;
  try {
    text = read_file(config_path);
  } catch (const IoError& e) {
    throw ConfigError("--config", e.what());
  }
  DatasetSpec spec = parse_dataset_config(text, fs::path(config_path).parent_path());
  if (workers) spec.workers = *workers;
  const std::size_t count = samples ? *samples : spec.count.value_or(0);
  if (count < 1) throw ConfigError("--samples", "sample count must be at least 1");
  if (!seed && !spec.seed) throw ConfigError("--seed", "no seed given");
  const std::uint64_t s = seed ? *seed : *spec.seed;

  const DatasetManifest manifest = generate_dataset(spec, count, s, out_dir);
  std::size_t failed = 0;
  for (const auto& row : manifest.rows) failed += row.failed ? 1 : 0;
  std::fprintf(stderr, "generated %zu samples (%zu failed) into %s\n", manifest.rows.size(),
               failed, out_dir.c_str());
  return 0;
}

int run_bench(const std::string& config_path, const std::string& scale_text,
              const std::string& report_path, std::size_t repeats, bool skip_reference) {
  const auto cases = load_benchmark_config(config_path);
  const auto sizes = parse_list(scale_text, "--scale");
  BenchmarkOptions options;
  options.optimized_repeats = repeats;
  options.run_reference = !skip_reference;
  const auto rows = run_benchmark(cases, sizes, options);
  std::cerr << benchmark_table(rows);
  write_file_atomic(report_path, benchmark_json(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face-milling surface topography simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, surface_path, roi_text, profile_text, report_path;
  std::string leveling = "mean", format = "json", scale_text = "1";
  std::optional<unsigned> workers;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  bool trajectory = false, skip_reference = false;
  std::size_t repeats = 1;

  auto* sim = app.add_subcommand("simulate", "Simulate one surface from a JSON configuration");
  sim->add_option("--config", config_path, "Simulation configuration")->required();
  sim->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  sim->add_option("--workers", workers, "Worker threads");
  sim->add_flag("--trajectory", trajectory, "Record and export the lowest-point trajectory");

  auto* rough = app.add_subcommand("roughness", "Areal and line roughness of a surface file");
  rough->add_option("--surface", surface_path, "SRTF surface file")->required();
  rough->add_option("--roi", roi_text, "Region x0,y0,x1,y1 in mm");
  rough->add_option("--profile", profile_text, "feed|pickfeed[:index] line roughness");
  rough->add_option("--leveling", leveling, "mean or plane");
  rough->add_option("--format", format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));

  auto* data = app.add_subcommand("dataset", "Generate a Latin hypercube dataset");
  data->add_option("--config", config_path, "Dataset configuration")->required();
  data->add_option("--samples", samples, "Sample count (overrides the config)");
  data->add_option("--seed", seed, "Sampler seed (overrides the config)");
  data->add_option("--out", out_dir, "Output directory")->required();
  data->add_option("--workers", workers, "Concurrent samples");

  auto* bench = app.add_subcommand("bench", "Time the optimized kernel against the reference");
  bench->add_option("--config", config_path, "Simulation or benchmark configuration")->required();
  bench->add_option("--scale", scale_text, "Comma-separated time-resolution multipliers");
  bench->add_option("--out", report_path, "JSON report path")->required();
  bench->add_option("--repeats", repeats, "Best-of repeats for the optimized kernel");
  bench->add_flag("--no-reference", skip_reference, "Skip the reference kernel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*sim) return run_simulate(config_path, out_dir, workers, trajectory);
    if (*rough) return run_roughness(surface_path, roi_text, profile_text, leveling, format);
    if (*data) return run_dataset(config_path, samples, seed, out_dir, workers);
    if (*bench) return run_bench(config_path, scale_text, report_path, repeats, skip_reference);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const SurfaceFormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
