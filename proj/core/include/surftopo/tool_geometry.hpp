#pragma once

#include <cstddef>
#include <vector>

namespace surftopo {

/// Mounting deviation of one insert, mm.
struct Runout {
  double radial = 0.0;
  double axial = 0.0;

  bool operator==(const Runout&) const = default;
};

/// Indexable face mill with circular inserts. Lengths in mm, angles in rad.
struct ToolDefinition {
  double cutting_diameter = 0.0;  // D, distance between opposite insert centres
  double insert_radius = 0.0;     // R
  int tooth_count = 0;            // z_n
  double radial_rake = 0.0;       // gamma_f
  double axial_rake = 0.0;        // gamma_p
  std::vector<Runout> runouts;    // runouts[K - 1] belongs to tooth K

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  /// Largest |(K - 1) * eps_r| over all teeth.
  double max_radial_offset() const;

  bool operator==(const ToolDefinition&) const = default;
};

/// Convenience constructor: `tooth_count` teeth with identical run-out.
ToolDefinition make_tool(double cutting_diameter, double insert_radius, int tooth_count,
                         double radial_rake = 0.0, double axial_rake = 0.0,
                         Runout runout = {});

/// Point on the active (lower) arc of a circular insert, cutting-edge frame,
/// homogeneous coordinate implicit (w = 1).
struct CuttingEdgePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const CuttingEdgePoint&) const = default;
};

/// Point at arc coordinate `l` on an insert of radius `insert_radius`:
/// (l, 0, R - sqrt(R^2 - l^2)). Throws DomainError when |l| > R.
CuttingEdgePoint edge_point(double l, double insert_radius);

/// Half-length of the engaged edge segment: the larger of the chord
/// half-length at immersion `depth_of_cut` and the feed-derived minimum
/// f_z / (2 cos gamma_f).
double effective_half_length(double insert_radius, double depth_of_cut, double feed_per_tooth,
                             double radial_rake);

/// Uniform arc coordinate of sample `index` out of `count` over [-h, h].
/// The endpoints are exact.
inline double edge_coordinate(double half_length, std::size_t index, std::size_t count) {
  if (index == 0) return -half_length;
  if (index + 1 == count) return half_length;
  return -half_length + (2.0 * half_length * static_cast<double>(index)) /
                            static_cast<double>(count - 1);
}

struct EdgeDiscretization {
  double half_length = 0.0;
  std::vector<CuttingEdgePoint> points;

  std::size_t size() const noexcept { return points.size(); }
};

EdgeDiscretization discretize_edge(const ToolDefinition& tool, double depth_of_cut,
                                   double feed_per_tooth, std::size_t point_count);

/// Smallest N >= 2 whose sample spacing 2h/(N-1) does not exceed half the
/// grid spacing.
std::size_t default_edge_point_count(double half_length, double grid_spacing);

}  // namespace surftopo
