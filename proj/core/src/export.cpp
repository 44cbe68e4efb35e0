#include "surftopo/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "json.hpp"
#include "surftopo/errors.hpp"
#include "surftopo/file_util.hpp"

namespace surftopo {

namespace {

using json = nlohmann::json;

void check_roi(const GridSpec& spec, const CellRange& roi) {
  if (roi.i0 > roi.i1 || roi.j0 > roi.j1) throw DomainError("empty region of interest");
  if (roi.i1 > spec.m || roi.j1 > spec.n)
    throw DomainError("region of interest extends beyond the grid");
}

json metrics_object(const ArealMetrics& m) {
  json out = {{"units", "um"},     {"cell_count", m.cell_count}, {"sa", m.sa}, {"sq", m.sq},
              {"sp", m.sp},        {"sv", m.sv},                 {"sz", m.sz}};
  out["ssk"] = m.ssk ? json(*m.ssk) : json(nullptr);
  out["sku"] = m.sku ? json(*m.sku) : json(nullptr);
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string heights_csv(const HeightField& field, const CellRange& roi) {
  const GridSpec& spec = field.spec();
  check_roi(spec, roi);
  std::string out;
  for (std::size_t i = roi.i0; i <= roi.i1; ++i) {
    if (i != roi.i0) out += ',';
    out += format_number(spec.x(i));
  }
  out += '\n';
  const auto values = field.values();
  for (std::size_t j = roi.j0; j <= roi.j1; ++j) {
    for (std::size_t i = roi.i0; i <= roi.i1; ++i) {
      if (i != roi.i0) out += ',';
      const double z = values[field.flat_index({i, j})];
      out += z == field.stock_height() ? std::string("nan") : format_number(z * 1000.0);
    }
    out += '\n';
  }
  return out;
}

std::string graymap_p5(const HeightField& field, const CellRange& roi) {
  const GridSpec& spec = field.spec();
  check_roi(spec, roi);
  const auto values = field.values();
  const double stock = field.stock_height();
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t j = roi.j0; j <= roi.j1; ++j)
    for (std::size_t i = roi.i0; i <= roi.i1; ++i) {
      const double z = values[field.flat_index({i, j})];
      if (z == stock) continue;
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
  if (!(hi >= lo)) throw DomainError("region of interest holds no machined cell");

  std::string out = "P5\n" + std::to_string(roi.width()) + " " + std::to_string(roi.height()) +
                    "\n65535\n";
  out.reserve(out.size() + 2 * roi.size());
  for (std::size_t r = 0; r < roi.height(); ++r) {
    const std::size_t j = roi.j1 - r;
    for (std::size_t i = roi.i0; i <= roi.i1; ++i) {
      const double z = values[field.flat_index({i, j})];
      std::uint16_t level = 0;
      if (z != stock) {
        level = hi > lo ? static_cast<std::uint16_t>(
                              1 + std::lround((z - lo) / (hi - lo) * 65534.0))
                        : std::uint16_t{32768};
      }
      out.push_back(static_cast<char>(level >> 8));
      out.push_back(static_cast<char>(level & 0xFF));
    }
  }
  return out;
}

std::string metrics_json(const ArealMetrics& metrics) { return metrics_object(metrics).dump(2) + "\n"; }

std::string metrics_table(const ArealMetrics& m) {
  const auto line = [](const char* name, const std::string& value, const char* unit) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-4s %24s %s\n", name, value.c_str(), unit);
    return std::string(buf);
  };
  std::string out;
  out += line("Sa", format_number(m.sa), "um");
  out += line("Sq", format_number(m.sq), "um");
  out += line("Sp", format_number(m.sp), "um");
  out += line("Sv", format_number(m.sv), "um");
  out += line("Sz", format_number(m.sz), "um");
  out += line("Ssk", m.ssk ? format_number(*m.ssk) : "undefined", "");
  out += line("Sku", m.sku ? format_number(*m.sku) : "undefined", "");
  out += line("N", std::to_string(m.cell_count), "cells");
  return out;
}

std::string trajectory_csv(const TrajectoryRecord& record) {
  std::string out = "t_s,tooth,x_mm,y_mm,z_mm\n";
  for (const auto& s : record.samples) {
    out += format_number(s.t);
    out += ',' + std::to_string(s.tooth);
    out += ',' + format_number(s.x);
    out += ',' + format_number(s.y);
    out += ',' + format_number(s.z);
    out += '\n';
  }
  return out;
}

std::string profile_csv(const LineProfile& profile) {
  std::string out = "position_mm,height_um\n";
  for (std::size_t k = 0; k < profile.heights.size(); ++k) {
    out += format_number(profile.origin + static_cast<double>(k) * profile.spacing);
    out += ',' + format_number(profile.heights[k] * 1000.0) + '\n';
  }
  return out;
}

std::string benchmark_json(std::span<const BenchmarkRow> rows) {
  json list = json::array();
  for (const auto& r : rows)
    list.push_back({{"case", r.case_id},
                    {"scale", r.scale},
                    {"trajectory_points", r.trajectory_points},
                    {"t_reference_s", r.t_reference_s},
                    {"t_optimized_s", r.t_optimized_s},
                    {"speedup", r.speedup}});
  json fits = json::array();
  std::vector<std::string> seen;
  for (const auto& r : rows) {
    if (std::find(seen.begin(), seen.end(), r.case_id) != seen.end()) continue;
    seen.push_back(r.case_id);
    std::vector<double> points, times;
    for (const auto& other : rows)
      if (other.case_id == r.case_id) {
        points.push_back(static_cast<double>(other.trajectory_points));
        times.push_back(other.t_optimized_s);
      }
    if (points.size() < 2) continue;
    try {
      const LinearFit fit = fit_linear(points, times);
      fits.push_back({{"case", r.case_id},
                      {"slope_s_per_point", fit.slope},
                      {"intercept_s", fit.intercept},
                      {"r_squared", fit.r_squared}});
    } catch (const DomainError&) {
    }
  }
  return json{{"rows", list}, {"fits", fits}}.dump(2) + "\n";
}

std::string benchmark_table(std::span<const BenchmarkRow> rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %6s %14s %12s %12s %9s\n", "case", "scale", "points",
                "t_ref[s]", "t_opt[s]", "speedup");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %6g %14zu %12.4f %12.4f %9.1f\n", r.case_id.c_str(),
                  r.scale, r.trajectory_points, r.t_reference_s, r.t_optimized_s, r.speedup);
    out += buf;
  }
  return out;
}

void export_views(const HeightField& field, const CellRange& roi,
                  const std::filesystem::path& dir) {
  const std::string pgm = graymap_p5(field, roi);
  json metrics;
  try {
    metrics = metrics_object(areal_metrics(field, roi));
  } catch (const DomainError& e) {
    metrics = {{"units", "um"}, {"metrics_error", e.what()}};
  }
  ensure_directory(dir);
  write_file_atomic(dir / "heights.csv", heights_csv(field, roi));
  write_file_atomic(dir / "surface.pgm", pgm);
  write_file_atomic(dir / "metrics.json", metrics.dump(2) + "\n");
}

}  // namespace surftopo
