// Deliberately naive forward sweep: every edge point of every tooth at every
// time step rebuilds its three transforms on the heap and multiplies them out.
// Matrix products use the same summation order as Transform4 so both kernels
// round identically.

#include <chrono>
#include <vector>

#include "surftopo/engine.hpp"

namespace surftopo {

namespace {

using HeapMatrix = std::vector<double>;

HeapMatrix to_heap(const Transform4& t) {
  return HeapMatrix(t.data().begin(), t.data().end());
}

HeapMatrix multiply(const HeapMatrix& a, const HeapMatrix& b) {
  HeapMatrix c(16, 0.0);
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a[r * 4 + k] * b[k * 4 + col];
      c[r * 4 + col] = s;
    }
  return c;
}

std::vector<double> apply(const HeapMatrix& a, const std::vector<double>& v) {
  std::vector<double> out(4, 0.0);
  for (int r = 0; r < 4; ++r) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += a[r * 4 + k] * v[k];
    out[r] = s;
  }
  return out;
}

}  // namespace

SimulationResult simulate_reference(const SimulationConfig& config) {
  const SimulationPlan plan = plan_simulation(config);
  const ToolDefinition& tool = config.tool;
  const ProcessParameters& process = config.process;
  const std::size_t point_count = plan.edge.size();
  const double half_length = plan.edge.half_length;

  SimulationResult result;
  result.field = HeightField(config.grid, process.depth_of_cut);
  TrajectoryRecord record;

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t s = 0; s < plan.steps; ++s) {
    const double t = plan.time_at(s);
    for (int k = 1; k <= tool.tooth_count; ++k) {
      std::vector<Vec3> tooth_points;
      for (std::size_t p = 0; p < point_count; ++p) {
        const CuttingEdgePoint q =
            edge_point(edge_coordinate(half_length, p, point_count), tool.insert_radius);
        const HeapMatrix to_tool = to_heap(edge_to_tool_transform(tool, k));
        const HeapMatrix to_spindle = to_heap(tool_to_spindle_transform(
            process.phase, k, tool.tooth_count, process.angular_velocity, t));
        const HeapMatrix to_workpiece = to_heap(
            spindle_to_workpiece_transform(process.initial_position, process.feed_speed, t));
        const HeapMatrix chain = multiply(to_workpiece, multiply(to_spindle, to_tool));
        const std::vector<double> w = apply(chain, std::vector<double>{q.x, q.y, q.z, 1.0});

        if (const auto idx = locate(w[0], w[1], config.grid)) update_min(result.field, *idx, w[2]);
        if (config.record_trajectory) tooth_points.push_back({w[0], w[1], w[2]});
      }
      if (config.record_trajectory) record_trajectory(record, t, k, tooth_points);
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  if (config.record_trajectory) result.trajectory = std::move(record);
  result.counters.time_steps = plan.steps;
  result.counters.trajectory_points =
      plan.steps * static_cast<std::size_t>(tool.tooth_count) * point_count;
  result.counters.cells_machined = result.field.machined_count();
  result.time_step = plan.time_step;
  result.t_start = plan.t_start;
  result.edge_points = point_count;
  result.wall_time_s = std::chrono::duration<double>(stop - start).count();
  return result;
}

}  // namespace surftopo
