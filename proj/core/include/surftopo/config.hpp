#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surftopo/engine.hpp"
#include "surftopo/kinematics.hpp"
#include "surftopo/surface_grid.hpp"
#include "surftopo/tool_geometry.hpp"

namespace surftopo {

struct EngineOptions {
  std::optional<double> max_angle_step;  // rad
  std::optional<double> time_step;       // s
  std::optional<std::size_t> edge_points;
  std::optional<TimeSpan> time_span;
  unsigned workers = 1;
  bool record_trajectory = false;

  bool operator==(const EngineOptions&) const = default;
};

struct OutputOptions {
  std::string directory;
  std::vector<std::string> formats;  // any of: srtf, csv, pgm, metrics, trajectory

  bool operator==(const OutputOptions&) const = default;
};

/// A validated simulation configuration in internal units (mm, s, rad).
///
/// The JSON schema:
///
///   {
///     "tool":    {"diameter": mm, "insert_radius": mm, "teeth": int,
///                 "radial_rake_deg" | "radial_rake_rad": angle,
///                 "axial_rake_deg"  | "axial_rake_rad":  angle,
///                 "runout": {"radial": mm, "axial": mm}          (all teeth)
///                 | "runouts": [{"radial": mm, "axial": mm}, ...] (per tooth)},
///     "process": {"v_c": m/min | "n_rpm": rev/min,
///                 "f_z": mm/tooth | "v_f": mm/min,
///                 "a_p": mm, "phase_deg" | "phase_rad": angle,
///                 "initial_position": [x0, y0, z0] mm},
///     "grid":    {"spacing": mm, "x_range": [min, max], "y_range": [min, max]},
///     "engine":  {"max_angle_step_deg" | "max_angle_step_rad": angle,
///                 "time_step": s, "edge_points": int | "auto",
///                 "workers": int, "record_trajectory": bool,
///                 "time_span": [start, end] s},
///     "output":  {"directory": path, "formats": [...]}
///   }
///
/// "engine" and "output" are optional. When both members of an alternative
/// pair are given they must agree. Unknown keys are rejected.
struct ConfigDocument {
  ToolDefinition tool;
  ProcessParameters process;              // fully resolved
  std::optional<Vec3> initial_position;   // as given; auto when empty
  GridSpec grid;
  EngineOptions engine;
  OutputOptions output;

  bool operator==(const ConfigDocument&) const = default;
};

/// Throws ConfigError naming the offending path (e.g. "process.f_z").
ConfigDocument parse_config(std::string_view text);
ConfigDocument load_config(const std::filesystem::path& path);

/// Canonical JSON form; parse_config(serialize_config(doc)) == doc.
std::string serialize_config(const ConfigDocument& doc);

/// Recomputes derived process fields and the automatic initial position
/// after direct edits, then validates the document.
void resolve_derived(ConfigDocument& doc);

/// Tool start when none is configured: centred over the grid in x, one
/// approach margin before the grid in y, z0 = 0.
Vec3 default_initial_position(const ToolDefinition& tool, const ProcessParameters& process,
                              const GridSpec& grid);

SimulationConfig to_simulation_config(const ConfigDocument& doc);

}  // namespace surftopo
