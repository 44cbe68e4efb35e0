#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surftopo/kinematics.hpp"
#include "surftopo/surface_grid.hpp"
#include "surftopo/tool_geometry.hpp"

namespace surftopo {

/// Upper bound on the rotation per time step when none is configured.
inline constexpr double kMaxAngleStepCap = 0.5 * std::numbers::pi / 180.0;

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;

  bool operator==(const TimeSpan&) const = default;
};

struct SimulationConfig {
  ToolDefinition tool;
  ProcessParameters process;
  GridSpec grid;
  std::optional<std::size_t> edge_point_count;  // auto when empty
  std::optional<double> max_angle_step;         // rad per step
  std::optional<double> time_step;              // s; overrides the angle rule
  std::optional<TimeSpan> time_span;            // auto-span when empty
  bool record_trajectory = false;
  unsigned worker_count = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Rotation per step used when `max_angle_step` is unset: the smaller of
/// kMaxAngleStepCap and the angle that moves the outermost edge point by
/// half a grid spacing.
double default_max_angle_step(const SimulationConfig& config);

/// min(max_angle_step / omega, spacing / v_f), or the explicit step.
double time_step(const SimulationConfig& config);

/// Tool-centre travel window that enters and leaves the grid with a margin of
/// D/2 + radial run-out + half edge length on both sides.
TimeSpan auto_time_span(const SimulationConfig& config);

/// Everything the kernels need, resolved and validated ahead of the loop.
struct SimulationPlan {
  EdgeDiscretization edge;
  double time_step = 0.0;
  double t_start = 0.0;
  std::size_t steps = 0;

  double time_at(std::size_t step) const noexcept {
    return t_start + static_cast<double>(step) * time_step;
  }
};

SimulationPlan plan_simulation(const SimulationConfig& config);

struct SimulationCounters {
  std::size_t time_steps = 0;
  std::size_t trajectory_points = 0;  // time_steps * z_n * N
  std::size_t cells_machined = 0;

  bool operator==(const SimulationCounters&) const = default;
};

struct SimulationResult {
  HeightField field;
  std::optional<TrajectoryRecord> trajectory;
  SimulationCounters counters;
  double time_step = 0.0;
  double t_start = 0.0;
  std::size_t edge_points = 0;
  double wall_time_s = 0.0;  // main loop only
};

/// Optimized sweep: per-(tooth, step) composite transforms, contiguous edge
/// buffers, bounding-box rejection of edge segments that cannot reach the
/// grid, and contiguous time chunks per worker merged by elementwise min.
/// Output does not depend on worker_count.
SimulationResult simulate(const SimulationConfig& config);

/// Straightforward sweep used as oracle and baseline: rebuilds every matrix
/// per edge point on the heap, single-threaded.
SimulationResult simulate_reference(const SimulationConfig& config);

struct BenchmarkCase {
  std::string id;
  SimulationConfig config;
};

struct BenchmarkRow {
  std::string case_id;
  double scale = 1.0;
  std::size_t trajectory_points = 0;
  double t_reference_s = 0.0;
  double t_optimized_s = 0.0;
  double speedup = 0.0;
};

struct BenchmarkOptions {
  std::size_t optimized_repeats = 1;  // best-of
  bool run_reference = true;
};

/// Copy of `config` with `multiplier` times as many time steps.
SimulationConfig scale_time_resolution(const SimulationConfig& config, double multiplier);

/// Runs both kernels for every case and size, checks that their fields and
/// trajectories agree (throws KernelMismatchError otherwise) and reports the
/// main-loop wall times.
std::vector<BenchmarkRow> run_benchmark(std::span<const BenchmarkCase> cases,
                                        std::span<const double> sizes,
                                        const BenchmarkOptions& options = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

}  // namespace surftopo
