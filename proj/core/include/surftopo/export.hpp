#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "surftopo/engine.hpp"
#include "surftopo/roughness.hpp"
#include "surftopo/surface_grid.hpp"

namespace surftopo {

/// Header row of x positions (mm), then one row per grid row j in ascending
/// y, heights in micrometres. Uncut cells are written as "nan".
std::string heights_csv(const HeightField& field, const CellRange& roi);

/// Binary 16-bit graymap (P5, maxval 65535, big-endian samples). Machined
/// cells are min-max normalised to [1, 65535], uncut cells are 0, and a flat
/// surface maps to 32768. The top image row is the largest y. Throws
/// DomainError when the region holds no machined cell.
std::string graymap_p5(const HeightField& field, const CellRange& roi);

std::string metrics_json(const ArealMetrics& metrics);
std::string metrics_table(const ArealMetrics& metrics);

std::string trajectory_csv(const TrajectoryRecord& record);

/// position_mm,height_um
std::string profile_csv(const LineProfile& profile);

/// Rows plus a per-case linear fit of optimized time against trajectory points.
std::string benchmark_json(std::span<const BenchmarkRow> rows);
std::string benchmark_table(std::span<const BenchmarkRow> rows);

/// Writes heights.csv, surface.pgm and metrics.json into `dir`. When the
/// region is only partly machined, metrics.json records why the metrics are
/// undefined instead of their values.
void export_views(const HeightField& field, const CellRange& roi,
                  const std::filesystem::path& dir);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

}  // namespace surftopo
