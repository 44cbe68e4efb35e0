#include "surftopo/kinematics.hpp"

#include <cmath>
#include <numbers>

#include "surftopo/errors.hpp"

namespace surftopo {

std::array<double, 4> Transform4::apply_homogeneous(const std::array<double, 4>& v) const noexcept {
  std::array<double, 4> out{};
  for (int r = 0; r < 4; ++r) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += m_[r * 4 + k] * v[k];
    out[r] = s;
  }
  return out;
}

void ProcessParameters::validate() const {
  if (!(angular_velocity > 0.0)) throw DomainError("angular velocity must be positive");
  if (!(feed_speed > 0.0)) throw DomainError("feed speed must be positive");
  if (!(depth_of_cut > 0.0)) throw DomainError("depth of cut must be positive");
  if (!(feed_per_tooth > 0.0)) throw DomainError("feed per tooth must be positive");
  if (!std::isfinite(phase) || !std::isfinite(initial_position.x) ||
      !std::isfinite(initial_position.y) || !std::isfinite(initial_position.z))
    throw DomainError("phase and initial position must be finite");
}

Transform4 edge_to_tool_transform(const ToolDefinition& tool, int tooth) {
  if (tooth < 1 || tooth > tool.tooth_count) throw DomainError("tooth index out of range");
  if (tool.runouts.size() != static_cast<std::size_t>(tool.tooth_count))
    throw DomainError("expected one run-out pair per tooth");

  const double cf = std::cos(tool.radial_rake);
  const double sf = std::sin(tool.radial_rake);
  const double cp = std::cos(tool.axial_rake);
  const double sp = std::sin(tool.axial_rake);
  const double k = static_cast<double>(tooth - 1);
  const Runout& eps = tool.runouts[static_cast<std::size_t>(tooth - 1)];

  Transform4 t;
  t(0, 0) = cf;
  t(0, 1) = sf * cp;
  t(0, 2) = sf * sp;
  t(0, 3) = tool.cutting_diameter / 2.0 + k * eps.radial;
  t(1, 0) = -sf;
  t(1, 1) = cf * cp;
  t(1, 2) = cf * sp;
  t(1, 3) = 0.0;
  t(2, 0) = 0.0;
  t(2, 1) = -sp;
  t(2, 2) = cp;
  t(2, 3) = k * eps.axial;
  t(3, 3) = 1.0;
  return t;
}

Transform4 tool_to_spindle_transform(double phase, int tooth, int tooth_count,
                                     double angular_velocity, double t) {
  if (tooth_count < 1) throw DomainError("tooth count must be at least 1");
  const double theta = phase +
                       2.0 * std::numbers::pi * static_cast<double>(tooth - 1) /
                           static_cast<double>(tooth_count) -
                       angular_velocity * t;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Transform4 m;
  m(0, 0) = c;
  m(0, 1) = s;
  m(1, 0) = -s;
  m(1, 1) = c;
  m(2, 2) = 1.0;
  m(3, 3) = 1.0;
  return m;
}

Transform4 spindle_to_workpiece_transform(const Vec3& initial_position, double feed_speed,
                                          double t) {
  Transform4 m = Transform4::identity();
  m(0, 3) = initial_position.x;
  m(1, 3) = initial_position.y + feed_speed * t;
  m(2, 3) = initial_position.z;
  return m;
}

Transform4 edge_to_workpiece_transform(const ToolDefinition& tool,
                                       const ProcessParameters& process, int tooth, double t) {
  const Transform4 to_tool = edge_to_tool_transform(tool, tooth);
  const Transform4 to_spindle = tool_to_spindle_transform(
      process.phase, tooth, tool.tooth_count, process.angular_velocity, t);
  const Transform4 to_workpiece =
      spindle_to_workpiece_transform(process.initial_position, process.feed_speed, t);
  return to_workpiece * (to_spindle * to_tool);
}

WorkpiecePoint transform_point(const ToolDefinition& tool, const ProcessParameters& process,
                               int tooth, double t, const CuttingEdgePoint& p) {
  const Vec3 v = edge_to_workpiece_transform(tool, process, tooth, t).apply(p);
  return {v.x, v.y, v.z, t, tooth};
}

ProcessParameters derive_kinematics(std::optional<double> cutting_speed,
                                    std::optional<double> spindle_speed, double feed_per_tooth,
                                    int tooth_count, double cutting_diameter) {
  if (cutting_speed.has_value() == spindle_speed.has_value())
    throw ConfigError("process", "exactly one of cutting speed and spindle speed is required");
  if (!(feed_per_tooth > 0.0)) throw ConfigError("process.f_z", "must be positive");
  if (tooth_count < 1) throw ConfigError("tool.teeth", "must be at least 1");
  if (!(cutting_diameter > 0.0)) throw ConfigError("tool.diameter", "must be positive");

  ProcessParameters p;
  if (cutting_speed) {
    if (!(*cutting_speed > 0.0)) throw ConfigError("process.v_c", "must be positive");
    p.spindle_speed = 1000.0 * *cutting_speed / (std::numbers::pi * cutting_diameter);
  } else {
    if (!(*spindle_speed > 0.0)) throw ConfigError("process.n_rpm", "must be positive");
    p.spindle_speed = *spindle_speed;
  }
  p.cutting_speed = std::numbers::pi * cutting_diameter * p.spindle_speed / 1000.0;
  p.angular_velocity = 2.0 * std::numbers::pi * p.spindle_speed / 60.0;
  p.feed_per_tooth = feed_per_tooth;
  p.feed_speed = feed_per_tooth * static_cast<double>(tooth_count) * p.spindle_speed / 60.0;
  return p;
}

}  // namespace surftopo
