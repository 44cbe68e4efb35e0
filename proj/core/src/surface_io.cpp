#include "surftopo/surface_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "surftopo/errors.hpp"
#include "surftopo/file_util.hpp"

namespace surftopo {

namespace {

static_assert(std::numeric_limits<double>::is_iec559);

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
  return v;
}

double get_f64(std::string_view in, std::size_t offset) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string encode_surface(const HeightField& field) {
  const GridSpec& spec = field.spec();
  const auto limit = std::numeric_limits<std::uint32_t>::max();
  if (spec.m > limit || spec.n > limit) throw SurfaceFormatError("grid too large for SRTF");
  std::string out;
  out.reserve(kSurfaceHeaderSize + 8 * spec.node_count());
  out.append("SRTF", 4);
  put_u32(out, kSurfaceFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(spec.m));
  put_u32(out, static_cast<std::uint32_t>(spec.n));
  put_f64(out, spec.spacing);
  put_f64(out, spec.x_min);
  put_f64(out, spec.y_min);
  put_f64(out, field.stock_height());
  for (double z : field.values()) put_f64(out, z);
  return out;
}

HeightField decode_surface(std::string_view bytes) {
  if (bytes.size() < kSurfaceHeaderSize) throw SurfaceFormatError("truncated SRTF header");
  if (bytes.substr(0, 4) != "SRTF") throw SurfaceFormatError("not an SRTF file (bad magic)");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kSurfaceFormatVersion)
    throw SurfaceFormatError("unsupported SRTF version " + std::to_string(version));

  GridSpec spec;
  spec.m = get_u32(bytes, 8);
  spec.n = get_u32(bytes, 12);
  spec.spacing = get_f64(bytes, 16);
  spec.x_min = get_f64(bytes, 24);
  spec.y_min = get_f64(bytes, 32);
  const double sentinel = get_f64(bytes, 40);
  spec.x_max = spec.x_min + static_cast<double>(spec.m) * spec.spacing;
  spec.y_max = spec.y_min + static_cast<double>(spec.n) * spec.spacing;
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw SurfaceFormatError(std::string("invalid SRTF grid: ") + e.what());
  }
  if (!std::isfinite(sentinel)) throw SurfaceFormatError("invalid SRTF sentinel");

  const std::size_t expected = spec.node_count();
  const std::size_t payload = bytes.size() - kSurfaceHeaderSize;
  if (payload != expected * 8)
    throw SurfaceFormatError("SRTF payload holds " + std::to_string(payload) +
                             " bytes, header implies " + std::to_string(expected * 8) +
                             (payload < expected * 8 ? " (truncated)" : " (trailing data)"));
  std::vector<double> values(expected);
  for (std::size_t k = 0; k < expected; ++k)
    values[k] = get_f64(bytes, kSurfaceHeaderSize + 8 * k);
  try {
    return HeightField::from_values(spec, sentinel, std::move(values));
  } catch (const DomainError& e) {
    throw SurfaceFormatError(std::string("invalid SRTF payload: ") + e.what());
  }
}

void write_surface(const HeightField& field, const std::filesystem::path& path) {
  write_file_atomic(path, encode_surface(field));
}

HeightField read_surface(const std::filesystem::path& path) {
  return decode_surface(read_file(path));
}

}  // namespace surftopo
