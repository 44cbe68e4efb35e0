#pragma once

#include <array>
#include <optional>

#include "surftopo/tool_geometry.hpp"

namespace surftopo {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

/// 4x4 homogeneous transform, row-major. Every transform built here has the
/// bottom row (0, 0, 0, 1) and a pure rotation in the upper-left block.
class Transform4 {
 public:
  constexpr Transform4() = default;

  static constexpr Transform4 identity() {
    Transform4 t;
    t.m_[0] = t.m_[5] = t.m_[10] = t.m_[15] = 1.0;
    return t;
  }

  constexpr double operator()(int row, int col) const { return m_[row * 4 + col]; }
  constexpr double& operator()(int row, int col) { return m_[row * 4 + col]; }

  const std::array<double, 16>& data() const noexcept { return m_; }

  /// Applies the transform to (p.x, p.y, p.z, 1) and drops the homogeneous
  /// coordinate, which stays exactly 1 for affine transforms.
  Vec3 apply(const CuttingEdgePoint& p) const noexcept {
    return {m_[0] * p.x + m_[1] * p.y + m_[2] * p.z + m_[3],
            m_[4] * p.x + m_[5] * p.y + m_[6] * p.z + m_[7],
            m_[8] * p.x + m_[9] * p.y + m_[10] * p.z + m_[11]};
  }

  /// Full homogeneous product, including the fourth row.
  std::array<double, 4> apply_homogeneous(const std::array<double, 4>& v) const noexcept;

  friend Transform4 operator*(const Transform4& a, const Transform4& b) noexcept {
    Transform4 c;
    for (int r = 0; r < 4; ++r)
      for (int col = 0; col < 4; ++col) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += a.m_[r * 4 + k] * b.m_[k * 4 + col];
        c.m_[r * 4 + col] = s;
      }
    return c;
  }

  bool operator==(const Transform4&) const = default;

 private:
  std::array<double, 16> m_{};
};

/// Kinematic state of a straight face-milling pass. Internal units: mm, s, rad.
struct ProcessParameters {
  double angular_velocity = 0.0;  // omega, rad/s
  double feed_speed = 0.0;        // v_f, mm/s along +Y_W
  double phase = 0.0;             // phi, rad
  double depth_of_cut = 0.0;      // a_p, mm
  double feed_per_tooth = 0.0;    // f_z, mm/tooth
  Vec3 initial_position{};        // (x_0, y_0, z_0), mm
  double spindle_speed = 0.0;     // n, rev/min
  std::optional<double> cutting_speed;  // v_c, m/min

  void validate() const;

  bool operator==(const ProcessParameters&) const = default;
};

struct WorkpiecePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;
  int tooth = 1;
};

/// Cutting-edge frame to tool frame for tooth `tooth` (1-based): rake
/// rotation plus the radial/axial insert offset D/2 + (K-1) eps_r, (K-1) eps_a.
Transform4 edge_to_tool_transform(const ToolDefinition& tool, int tooth);

/// Tool frame to spindle frame: rotation by
/// theta = phase + 2 pi (K-1) / z_n - omega t, laid out as
/// [[cos, sin], [-sin, cos]] in the XY block.
Transform4 tool_to_spindle_transform(double phase, int tooth, int tooth_count,
                                     double angular_velocity, double t);

/// Spindle frame to workpiece frame: translation (x0, y0 + v_f t, z0).
Transform4 spindle_to_workpiece_transform(const Vec3& initial_position, double feed_speed,
                                          double t);

/// T_SW * (T_TS * T_CT); the product every edge point of (tooth, t) shares.
Transform4 edge_to_workpiece_transform(const ToolDefinition& tool,
                                       const ProcessParameters& process, int tooth, double t);

WorkpiecePoint transform_point(const ToolDefinition& tool, const ProcessParameters& process,
                               int tooth, double t, const CuttingEdgePoint& p);

/// Resolves spindle speed, angular velocity and feed speed from either the
/// cutting speed (m/min) or the spindle speed (rev/min). Exactly one of the
/// two must be given; otherwise throws ConfigError.
ProcessParameters derive_kinematics(std::optional<double> cutting_speed,
                                    std::optional<double> spindle_speed, double feed_per_tooth,
                                    int tooth_count, double cutting_diameter);

}  // namespace surftopo
