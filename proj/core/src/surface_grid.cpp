#include "surftopo/surface_grid.hpp"

#include <algorithm>
#include <string>

#include "surftopo/errors.hpp"

namespace surftopo {

namespace {

std::size_t interval_count(double extent, double spacing, const char* axis) {
  const double count = std::round(extent / spacing);
  if (!(count >= 1.0))
    throw DomainError(std::string("grid ") + axis + " extent must span at least one spacing");
  if (count > 1e8) throw DomainError(std::string("grid ") + axis + " extent is too large");
  return static_cast<std::size_t>(count);
}

}  // namespace

GridSpec GridSpec::from_extents(double spacing, double x_min, double x_max, double y_min,
                                double y_max) {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw DomainError("grid spacing must be positive");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
      !std::isfinite(y_max))
    throw DomainError("grid extents must be finite");
  if (!(x_max > x_min) || !(y_max > y_min)) throw DomainError("grid extents must be increasing");
  GridSpec spec;
  spec.spacing = spacing;
  spec.x_min = x_min;
  spec.y_min = y_min;
  spec.m = interval_count(x_max - x_min, spacing, "x");
  spec.n = interval_count(y_max - y_min, spacing, "y");
  spec.x_max = spec.x(spec.m);
  spec.y_max = spec.y(spec.n);
  return spec;
}

void GridSpec::validate() const {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw DomainError("grid spacing must be positive");
  if (m < 1 || n < 1) throw DomainError("grid needs at least one interval per axis");
  if (!std::isfinite(x_min) || !std::isfinite(y_min))
    throw DomainError("grid origin must be finite");
}

std::optional<GridIndex> locate(double x, double y, const GridSpec& spec) {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw DomainError("cannot locate a non-finite point");
  const std::int64_t flat = locate_flat(x, y, spec);
  if (flat < 0) return std::nullopt;
  const auto cols = static_cast<std::int64_t>(spec.columns());
  return GridIndex{static_cast<std::size_t>(flat % cols), static_cast<std::size_t>(flat / cols)};
}

HeightField::HeightField(GridSpec spec, double stock_height)
    : spec_(spec), stock_height_(stock_height) {
  spec_.validate();
  if (!std::isfinite(stock_height)) throw DomainError("stock height must be finite");
  heights_.assign(spec_.node_count(), stock_height);
}

HeightField HeightField::from_values(GridSpec spec, double stock_height,
                                     std::vector<double> values) {
  HeightField field(spec, stock_height);
  if (values.size() != field.heights_.size())
    throw DomainError("height count does not match the grid");
  for (double v : values)
    if (!(v <= stock_height)) throw DomainError("height above the stock surface");
  field.heights_ = std::move(values);
  return field;
}

double HeightField::at(GridIndex idx) const {
  if (!contains(idx))
    throw BoundaryError("grid index (" + std::to_string(idx.i) + ", " + std::to_string(idx.j) +
                        ") outside the height field");
  return heights_[flat_index(idx)];
}

std::size_t HeightField::machined_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      heights_.begin(), heights_.end(), [this](double h) { return h != stock_height_; }));
}

void HeightField::merge_min(const HeightField& other) {
  if (!(other.spec_ == spec_)) throw DomainError("cannot merge fields on different grids");
  for (std::size_t k = 0; k < heights_.size(); ++k)
    if (other.heights_[k] < heights_[k]) heights_[k] = other.heights_[k];
}

bool update_min(HeightField& field, GridIndex idx, double z) {
  if (!field.contains(idx))
    throw BoundaryError("grid index (" + std::to_string(idx.i) + ", " + std::to_string(idx.j) +
                        ") outside the height field");
  double& cell = field.mutable_values()[field.flat_index(idx)];
  if (z < cell) {
    cell = z;
    return true;
  }
  return false;
}

void record_trajectory(TrajectoryRecord& record, double t, int tooth,
                       std::span<const Vec3> points) {
  if (points.empty()) throw DomainError("no edge points to record");
  std::size_t best = 0;
  for (std::size_t p = 1; p < points.size(); ++p)
    if (points[p].z < points[best].z) best = p;
  const Vec3& q = points[best];
  record.samples.push_back({t, tooth, q.x, q.y, q.z});
}

}  // namespace surftopo
