#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "surftopo/surface_grid.hpp"

namespace surftopo {

/// Inclusive rectangle of grid nodes.
struct CellRange {
  std::size_t i0 = 0;
  std::size_t j0 = 0;
  std::size_t i1 = 0;
  std::size_t j1 = 0;

  std::size_t width() const noexcept { return i1 - i0 + 1; }
  std::size_t height() const noexcept { return j1 - j0 + 1; }
  std::size_t size() const noexcept { return width() * height(); }

  bool operator==(const CellRange&) const = default;
};

CellRange full_range(const GridSpec& spec);

/// Cell range covering the rectangle [x0, x1] x [y0, y1] in mm, clipped to
/// the grid. Throws DomainError when the rectangle misses the grid.
CellRange range_from_extents(const GridSpec& spec, double x0, double y0, double x1, double y1);

enum class Leveling {
  kMean,   // subtract the arithmetic mean height
  kPlane,  // subtract the least-squares plane
};

/// Areal height parameters in micrometres. Skewness and kurtosis are
/// undefined (nullopt) for a surface with zero RMS deviation.
struct ArealMetrics {
  double sa = 0.0;
  double sq = 0.0;
  double sp = 0.0;
  double sv = 0.0;
  double sz = 0.0;
  std::optional<double> ssk;
  std::optional<double> sku;
  std::size_t cell_count = 0;
};

/// Metrics of already-levelled deviations given in mm.
ArealMetrics metrics_from_deviations(std::span<const double> deviations_mm);

/// Metrics of raw heights in mm, levelled by mean subtraction.
ArealMetrics metrics_from_heights(std::span<const double> heights_mm);

/// Throws DomainError when `roi` is empty, leaves the grid, or contains an
/// uncut cell.
ArealMetrics areal_metrics(const HeightField& field, const CellRange& roi,
                           Leveling leveling = Leveling::kMean);

enum class ProfileDirection {
  kFeed,      // along Y_W: one grid column
  kPickFeed,  // along X_W: one grid row
};

struct LineProfile {
  ProfileDirection direction = ProfileDirection::kFeed;
  std::size_t index = 0;   // column i for feed, row j for pick-feed
  double origin = 0.0;     // position of the first sample, mm
  double spacing = 0.0;    // mm
  std::vector<double> heights;  // mm
};

/// Column (feed) or row (pick-feed) of the field restricted to `roi`.
/// Without an index the centre line round(m/2) or round(n/2) is used.
/// Throws DomainError when the line crosses an uncut cell.
LineProfile extract_profile(const HeightField& field, ProfileDirection direction,
                            std::optional<std::size_t> index = std::nullopt,
                            std::optional<CellRange> roi = std::nullopt);

/// Mean absolute deviation from the profile mean, micrometres.
double line_roughness(const LineProfile& profile);

}  // namespace surftopo
