#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "surftopo/kinematics.hpp"

namespace surftopo {

/// Regular workpiece grid with (m + 1) x (n + 1) nodes at
/// x_i = x_min + i * spacing, y_j = y_min + j * spacing.
struct GridSpec {
  double spacing = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;

  /// m = round((x_max - x_min) / spacing), likewise n; both must be >= 1.
  /// The stored maxima are snapped to the last node.
  static GridSpec from_extents(double spacing, double x_min, double x_max, double y_min,
                               double y_max);

  void validate() const;

  std::size_t columns() const noexcept { return m + 1; }
  std::size_t rows() const noexcept { return n + 1; }
  std::size_t node_count() const noexcept { return (m + 1) * (n + 1); }
  double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * spacing; }
  double y(std::size_t j) const noexcept { return y_min + static_cast<double>(j) * spacing; }

  bool operator==(const GridSpec&) const = default;
};

struct GridIndex {
  std::size_t i = 0;
  std::size_t j = 0;

  bool operator==(const GridIndex&) const = default;
};

/// Node whose sampling cell contains (x, y). Cells are half-open: a point at
/// exactly x_i + spacing/2 belongs to node i + 1. Returns nullopt outside
/// the grid; throws DomainError for non-finite coordinates.
std::optional<GridIndex> locate(double x, double y, const GridSpec& spec);

inline std::optional<GridIndex> locate(const WorkpiecePoint& p, const GridSpec& spec) {
  return locate(p.x, p.y, spec);
}

/// Unchecked flat-index variant used in the hot loop; returns -1 when
/// (x, y) lies outside the grid. Same rounding as `locate`.
inline std::int64_t locate_flat(double x, double y, const GridSpec& spec) noexcept {
  const double u = std::floor((x - spec.x_min) / spec.spacing + 0.5);
  const double v = std::floor((y - spec.y_min) / spec.spacing + 0.5);
  if (!(u >= 0.0 && u <= static_cast<double>(spec.m) && v >= 0.0 &&
        v <= static_cast<double>(spec.n)))
    return -1;
  return static_cast<std::int64_t>(v) * static_cast<std::int64_t>(spec.m + 1) +
         static_cast<std::int64_t>(u);
}

/// Row-major height field (row = j, column = i), in mm. Cells start at the
/// stock height; a cell still equal to it is uncut.
class HeightField {
 public:
  HeightField() = default;
  HeightField(GridSpec spec, double stock_height);

  /// Builds a field from stored values. Throws DomainError when the size does
  /// not match or a value lies above the stock height.
  static HeightField from_values(GridSpec spec, double stock_height, std::vector<double> values);

  const GridSpec& spec() const noexcept { return spec_; }
  double stock_height() const noexcept { return stock_height_; }

  std::size_t flat_index(GridIndex idx) const noexcept { return idx.j * spec_.columns() + idx.i; }
  bool contains(GridIndex idx) const noexcept { return idx.i <= spec_.m && idx.j <= spec_.n; }

  /// Bounds-checked access; throws BoundaryError.
  double at(GridIndex idx) const;
  bool is_uncut(GridIndex idx) const { return at(idx) == stock_height_; }

  std::span<const double> values() const noexcept { return heights_; }
  std::span<double> mutable_values() noexcept { return heights_; }

  std::size_t machined_count() const noexcept;

  /// Elementwise minimum with a field on the same grid.
  void merge_min(const HeightField& other);

  bool operator==(const HeightField&) const = default;

 private:
  GridSpec spec_{};
  double stock_height_ = 0.0;
  std::vector<double> heights_;
};

/// Lowers the cell to z when z is strictly below the stored height. Returns
/// whether the cell changed. Throws BoundaryError for an index off the grid.
bool update_min(HeightField& field, GridIndex idx, double z);

struct TrajectorySample {
  double t = 0.0;
  int tooth = 1;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const TrajectorySample&) const = default;
};

/// Lowest edge point of every tooth at every time step, in time order with
/// ties ordered by tooth.
struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;

  bool operator==(const TrajectoryRecord&) const = default;
};

/// Appends the lowest of `points` (ties: smallest edge index). Throws
/// DomainError for an empty point set.
void record_trajectory(TrajectoryRecord& record, double t, int tooth,
                       std::span<const Vec3> points);

}  // namespace surftopo
