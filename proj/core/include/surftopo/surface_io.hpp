#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "surftopo/surface_grid.hpp"

namespace surftopo {

/// SRTF layout, little-endian throughout:
///
///   offset  size  field
///        0     4  magic "SRTF"
///        4     4  u32 version
///        8     4  u32 m
///       12     4  u32 n
///       16     8  f64 spacing, mm
///       24     8  f64 x_min, mm
///       32     8  f64 y_min, mm
///       40     8  f64 uncut sentinel (stock height), mm
///       48        (m+1)(n+1) f64 heights, row-major (row j, column i), mm
inline constexpr std::uint32_t kSurfaceFormatVersion = 1;
inline constexpr std::size_t kSurfaceHeaderSize = 48;

std::string encode_surface(const HeightField& field);

/// Throws SurfaceFormatError on bad magic, unknown version, a payload that
/// does not match the header, or an invalid grid.
HeightField decode_surface(std::string_view bytes);

void write_surface(const HeightField& field, const std::filesystem::path& path);
HeightField read_surface(const std::filesystem::path& path);

}  // namespace surftopo
