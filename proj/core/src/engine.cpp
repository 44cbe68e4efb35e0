#include "surftopo/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "surftopo/errors.hpp"

namespace surftopo {

namespace {

template <typename Fn>
void rethrow_as_config(const char* path, Fn&& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

// Constant data shared by all workers.
struct Prepared {
  const SimulationConfig* config = nullptr;
  const SimulationPlan* plan = nullptr;
  std::vector<Transform4> edge_to_tool;  // per tooth
  std::vector<double> edge_x;            // contiguous edge samples
  std::vector<double> edge_z;
  double edge_z_max = 0.0;
  // Bounding box of every position `locate` accepts, widened by one spacing.
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
};

Prepared prepare(const SimulationConfig& config, const SimulationPlan& plan) {
  Prepared prep;
  prep.config = &config;
  prep.plan = &plan;
  for (int k = 1; k <= config.tool.tooth_count; ++k)
    prep.edge_to_tool.push_back(edge_to_tool_transform(config.tool, k));
  prep.edge_x.reserve(plan.edge.size());
  prep.edge_z.reserve(plan.edge.size());
  for (const auto& p : plan.edge.points) {
    prep.edge_x.push_back(p.x);
    prep.edge_z.push_back(p.z);
    prep.edge_z_max = std::max(prep.edge_z_max, p.z);
  }
  const GridSpec& g = config.grid;
  prep.x_lo = g.x_min - 1.5 * g.spacing;
  prep.x_hi = g.x_min + (static_cast<double>(g.m) + 1.5) * g.spacing;
  prep.y_lo = g.y_min - 1.5 * g.spacing;
  prep.y_hi = g.y_min + (static_cast<double>(g.n) + 1.5) * g.spacing;
  return prep;
}

// Conservative test whether any edge point under `c` can land on the grid:
// all samples lie in the rectangle l in [-h, h], z in [0, z_max] of the edge
// plane, so their images lie in the hull of its four transformed corners.
bool may_touch_grid(const Transform4& c, const Prepared& prep) {
  const double h = prep.plan->edge.half_length;
  const double zs[2] = {0.0, prep.edge_z_max};
  const double ls[2] = {-h, h};
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  for (double l : ls)
    for (double z : zs) {
      const double x = c(0, 0) * l + c(0, 2) * z + c(0, 3);
      const double y = c(1, 0) * l + c(1, 2) * z + c(1, 3);
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  return x_max >= prep.x_lo && x_min <= prep.x_hi && y_max >= prep.y_lo && y_min <= prep.y_hi;
}

void sweep(const Prepared& prep, std::size_t step_begin, std::size_t step_end,
           HeightField& field, std::vector<TrajectorySample>* trajectory) {
  const SimulationConfig& config = *prep.config;
  const SimulationPlan& plan = *prep.plan;
  const ProcessParameters& process = config.process;
  const GridSpec& grid = config.grid;
  const int teeth = config.tool.tooth_count;
  const std::size_t point_count = prep.edge_x.size();
  const double* xs = prep.edge_x.data();
  const double* zs = prep.edge_z.data();
  double* heights = field.mutable_values().data();

  for (std::size_t s = step_begin; s < step_end; ++s) {
    const double t = plan.time_at(s);
    const Transform4 to_workpiece =
        spindle_to_workpiece_transform(process.initial_position, process.feed_speed, t);
    for (int k = 1; k <= teeth; ++k) {
      const Transform4 to_spindle = tool_to_spindle_transform(
          process.phase, k, teeth, process.angular_velocity, t);
      const Transform4 c =
          to_workpiece * (to_spindle * prep.edge_to_tool[static_cast<std::size_t>(k - 1)]);
      if (trajectory == nullptr && !may_touch_grid(c, prep)) continue;

      const double c00 = c(0, 0), c02 = c(0, 2), c03 = c(0, 3);
      const double c10 = c(1, 0), c12 = c(1, 2), c13 = c(1, 3);
      const double c20 = c(2, 0), c22 = c(2, 2), c23 = c(2, 3);
      double best_z = std::numeric_limits<double>::infinity();
      double best_x = 0.0;
      double best_y = 0.0;
      for (std::size_t p = 0; p < point_count; ++p) {
        // y is identically zero on the edge profile, so its column drops out.
        const double x = c00 * xs[p] + c02 * zs[p] + c03;
        const double y = c10 * xs[p] + c12 * zs[p] + c13;
        const double z = c20 * xs[p] + c22 * zs[p] + c23;
        const std::int64_t cell = locate_flat(x, y, grid);
        if (cell >= 0 && z < heights[cell]) heights[cell] = z;
        if (z < best_z) {
          best_z = z;
          best_x = x;
          best_y = y;
        }
      }
      if (trajectory != nullptr) trajectory->push_back({t, k, best_x, best_y, best_z});
    }
  }
}

}  // namespace

void SimulationConfig::validate() const {
  rethrow_as_config("tool", [&] { tool.validate(); });
  rethrow_as_config("process", [&] { process.validate(); });
  rethrow_as_config("grid", [&] { grid.validate(); });
  if (process.depth_of_cut > tool.insert_radius)
    throw ConfigError("process.a_p", "depth of cut exceeds the insert radius");
  if (edge_point_count && *edge_point_count < 2)
    throw ConfigError("engine.edge_points", "at least 2 edge points are required");
  if (max_angle_step && !(*max_angle_step > 0.0 && std::isfinite(*max_angle_step)))
    throw ConfigError("engine.max_angle_step", "must be positive");
  if (time_step && !(*time_step > 0.0 && std::isfinite(*time_step)))
    throw ConfigError("engine.time_step", "must be positive");
  if (time_span && !(time_span->start >= 0.0 && time_span->end >= time_span->start &&
                     std::isfinite(time_span->end)))
    throw ConfigError("engine.time_span", "must satisfy 0 <= start <= end");
  if (worker_count < 1) throw ConfigError("engine.workers", "must be at least 1");
}

double default_max_angle_step(const SimulationConfig& config) {
  const double half_length =
      effective_half_length(config.tool.insert_radius, config.process.depth_of_cut,
                            config.process.feed_per_tooth, config.tool.radial_rake);
  const double outer_radius =
      config.tool.cutting_diameter / 2.0 + config.tool.max_radial_offset() + half_length;
  return std::min(kMaxAngleStepCap, config.grid.spacing / (2.0 * outer_radius));
}

double time_step(const SimulationConfig& config) {
  if (config.time_step) return *config.time_step;
  const double angle = config.max_angle_step ? *config.max_angle_step
                                             : default_max_angle_step(config);
  const double by_rotation = angle / config.process.angular_velocity;
  const double by_feed = config.grid.spacing / config.process.feed_speed;
  return std::min(by_rotation, by_feed);
}

TimeSpan auto_time_span(const SimulationConfig& config) {
  const double half_length =
      effective_half_length(config.tool.insert_radius, config.process.depth_of_cut,
                            config.process.feed_per_tooth, config.tool.radial_rake);
  const double margin =
      config.tool.cutting_diameter / 2.0 + config.tool.max_radial_offset() + half_length;
  const double y0 = config.process.initial_position.y;
  const double vf = config.process.feed_speed;
  TimeSpan span;
  span.start = std::max(0.0, (config.grid.y_min - margin - y0) / vf);
  span.end = (config.grid.y_max + margin - y0) / vf;
  if (span.end < span.start)
    throw ConfigError("process.y0", "the tool starts beyond the far edge of the grid");
  return span;
}

SimulationPlan plan_simulation(const SimulationConfig& config) {
  config.validate();
  SimulationPlan plan;
  rethrow_as_config("tool", [&] {
    const double half_length =
        effective_half_length(config.tool.insert_radius, config.process.depth_of_cut,
                              config.process.feed_per_tooth, config.tool.radial_rake);
    const std::size_t n = config.edge_point_count
                              ? *config.edge_point_count
                              : default_edge_point_count(half_length, config.grid.spacing);
    plan.edge = discretize_edge(config.tool, config.process.depth_of_cut,
                                config.process.feed_per_tooth, n);
  });
  plan.time_step = time_step(config);
  if (!(plan.time_step > 0.0) || !std::isfinite(plan.time_step))
    throw ConfigError("engine.time_step", "resolved time step is not positive");
  const TimeSpan span = config.time_span ? *config.time_span : auto_time_span(config);
  const double intervals = std::floor((span.end - span.start) / plan.time_step + 1e-9);
  if (!(intervals < 1e12)) throw ConfigError("engine.time_step", "too many time steps");
  plan.t_start = span.start;
  plan.steps = static_cast<std::size_t>(intervals) + 1;
  return plan;
}

SimulationResult simulate(const SimulationConfig& config) {
  const SimulationPlan plan = plan_simulation(config);
  const Prepared prep = prepare(config, plan);
  const auto teeth = static_cast<std::size_t>(config.tool.tooth_count);

  const std::size_t workers =
      std::clamp<std::size_t>(config.worker_count, 1, std::max<std::size_t>(plan.steps, 1));
  const double stock = config.process.depth_of_cut;

  SimulationResult result;
  result.field = HeightField(config.grid, stock);
  std::vector<HeightField> private_fields(workers - 1, result.field);
  std::vector<std::vector<TrajectorySample>> trajectories(config.record_trajectory ? workers : 0);

  std::vector<std::size_t> bounds(workers + 1);
  for (std::size_t w = 0; w <= workers; ++w) bounds[w] = plan.steps * w / workers;
  for (std::size_t w = 0; w < trajectories.size(); ++w)
    trajectories[w].reserve((bounds[w + 1] - bounds[w]) * teeth);

  const auto start = std::chrono::steady_clock::now();
  auto run = [&](std::size_t w) {
    HeightField& field = w == 0 ? result.field : private_fields[w - 1];
    sweep(prep, bounds[w], bounds[w + 1], field,
          config.record_trajectory ? &trajectories[w] : nullptr);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(run, w);
    run(0);
    threads.clear();
    for (const auto& f : private_fields) result.field.merge_min(f);
  }
  const auto stop = std::chrono::steady_clock::now();

  if (config.record_trajectory) {
    TrajectoryRecord record;
    record.samples.reserve(plan.steps * teeth);
    for (const auto& chunk : trajectories)
      record.samples.insert(record.samples.end(), chunk.begin(), chunk.end());
    result.trajectory = std::move(record);
  }
  result.counters.time_steps = plan.steps;
  result.counters.trajectory_points = plan.steps * teeth * plan.edge.size();
  result.counters.cells_machined = result.field.machined_count();
  result.time_step = plan.time_step;
  result.t_start = plan.t_start;
  result.edge_points = plan.edge.size();
  result.wall_time_s = std::chrono::duration<double>(stop - start).count();
  return result;
}

}  // namespace surftopo
