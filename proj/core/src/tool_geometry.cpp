#include "surftopo/tool_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "surftopo/errors.hpp"

namespace surftopo {

void ToolDefinition::validate() const {
  if (!(cutting_diameter > 0.0) || !std::isfinite(cutting_diameter))
    throw DomainError("cutting diameter must be positive");
  if (!(insert_radius > 0.0) || !std::isfinite(insert_radius))
    throw DomainError("insert radius must be positive");
  if (tooth_count < 1) throw DomainError("tooth count must be at least 1");
  if (runouts.size() != static_cast<std::size_t>(tooth_count))
    throw DomainError("expected one run-out pair per tooth");
  const double half_pi = std::numbers::pi / 2.0;
  if (!(std::abs(radial_rake) < half_pi) || !(std::abs(axial_rake) < half_pi))
    throw DomainError("rake angles must lie in (-pi/2, pi/2)");
  for (std::size_t k = 0; k < runouts.size(); ++k) {
    const auto& r = runouts[k];
    if (!(std::abs(r.radial) < insert_radius) || !(std::abs(r.axial) < insert_radius))
      throw DomainError("run-out of tooth " + std::to_string(k + 1) +
                        " must be smaller than the insert radius");
  }
}

double ToolDefinition::max_radial_offset() const {
  double offset = 0.0;
  for (std::size_t k = 0; k < runouts.size(); ++k)
    offset = std::max(offset, std::abs(static_cast<double>(k) * runouts[k].radial));
  return offset;
}

ToolDefinition make_tool(double cutting_diameter, double insert_radius, int tooth_count,
                         double radial_rake, double axial_rake, Runout runout) {
  ToolDefinition tool;
  tool.cutting_diameter = cutting_diameter;
  tool.insert_radius = insert_radius;
  tool.tooth_count = tooth_count;
  tool.radial_rake = radial_rake;
  tool.axial_rake = axial_rake;
  tool.runouts.assign(static_cast<std::size_t>(std::max(tooth_count, 0)), runout);
  return tool;
}

CuttingEdgePoint edge_point(double l, double insert_radius) {
  if (!std::isfinite(l) || !(std::abs(l) <= insert_radius))
    throw DomainError("point off the insert arc");
  return {l, 0.0, insert_radius - std::sqrt(insert_radius * insert_radius - l * l)};
}

double effective_half_length(double insert_radius, double depth_of_cut, double feed_per_tooth,
                             double radial_rake) {
  if (!(depth_of_cut > 0.0)) throw DomainError("depth of cut must be positive");
  if (depth_of_cut > insert_radius)
    throw DomainError("depth of cut exceeds the insert radius");
  if (!(feed_per_tooth > 0.0)) throw DomainError("feed per tooth must be positive");
  if (!(std::abs(radial_rake) < std::numbers::pi / 2.0))
    throw DomainError("radial rake must lie in (-pi/2, pi/2)");

  const double rest = insert_radius - depth_of_cut;
  const double chord = std::sqrt(insert_radius * insert_radius - rest * rest);
  const double feed_minimum = feed_per_tooth / (2.0 * std::cos(radial_rake));
  return std::max(chord, feed_minimum);
}

EdgeDiscretization discretize_edge(const ToolDefinition& tool, double depth_of_cut,
                                   double feed_per_tooth, std::size_t point_count) {
  if (point_count < 2) throw DomainError("edge discretization needs at least 2 points");
  EdgeDiscretization edge;
  edge.half_length =
      effective_half_length(tool.insert_radius, depth_of_cut, feed_per_tooth, tool.radial_rake);
  edge.points.reserve(point_count);
  for (std::size_t p = 0; p < point_count; ++p)
    edge.points.push_back(
        edge_point(edge_coordinate(edge.half_length, p, point_count), tool.insert_radius));
  return edge;
}

std::size_t default_edge_point_count(double half_length, double grid_spacing) {
  if (!(half_length > 0.0) || !(grid_spacing > 0.0))
    throw DomainError("half length and grid spacing must be positive");
  // 2h / (N - 1) <= d / 2  <=>  N - 1 >= 4h / d
  const double intervals = std::ceil(4.0 * half_length / grid_spacing);
  return std::max<std::size_t>(2, static_cast<std::size_t>(intervals) + 1);
}

}  // namespace surftopo
