#include "surftopo/roughness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "surftopo/errors.hpp"

namespace surftopo {

namespace {

constexpr double kMicrometresPerMm = 1000.0;

void check_roi(const GridSpec& spec, const CellRange& roi) {
  if (roi.i0 > roi.i1 || roi.j0 > roi.j1) throw DomainError("empty region of interest");
  if (roi.i1 > spec.m || roi.j1 > spec.n)
    throw DomainError("region of interest extends beyond the grid");
}

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Solves the 3x3 normal equations of z = a + b x + c y by Cramer's rule.
std::array<double, 3> fit_plane(const std::vector<double>& xs, const std::vector<double>& ys,
                                const std::vector<double>& zs) {
  // Centre coordinates for conditioning.
  const double mx = mean_of(xs), my = mean_of(ys), mz = mean_of(zs);
  double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const double dx = xs[k] - mx, dy = ys[k] - my, dz = zs[k] - mz;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
    sxz += dx * dz;
    syz += dy * dz;
  }
  const double det = sxx * syy - sxy * sxy;
  double b = 0.0, c = 0.0;
  if (det != 0.0) {
    b = (sxz * syy - syz * sxy) / det;
    c = (sxx * syz - sxy * sxz) / det;
  } else if (sxx != 0.0) {
    b = sxz / sxx;
  } else if (syy != 0.0) {
    c = syz / syy;
  }
  return {mz - b * mx - c * my, b, c};
}

}  // namespace

CellRange full_range(const GridSpec& spec) { return {0, 0, spec.m, spec.n}; }

CellRange range_from_extents(const GridSpec& spec, double x0, double y0, double x1, double y1) {
  if (!(x1 >= x0) || !(y1 >= y0)) throw DomainError("region of interest must be increasing");
  const auto clip_lo = [](double u) { return std::max(0.0, std::ceil(u - 1e-9)); };
  const auto clip_hi = [](double u, std::size_t top) {
    return std::min(static_cast<double>(top), std::floor(u + 1e-9));
  };
  const double i0 = clip_lo((x0 - spec.x_min) / spec.spacing);
  const double i1 = clip_hi((x1 - spec.x_min) / spec.spacing, spec.m);
  const double j0 = clip_lo((y0 - spec.y_min) / spec.spacing);
  const double j1 = clip_hi((y1 - spec.y_min) / spec.spacing, spec.n);
  if (i0 > i1 || j0 > j1) throw DomainError("region of interest does not contain a grid node");
  return {static_cast<std::size_t>(i0), static_cast<std::size_t>(j0),
          static_cast<std::size_t>(i1), static_cast<std::size_t>(j1)};
}

ArealMetrics metrics_from_deviations(std::span<const double> deviations_mm) {
  if (deviations_mm.empty()) throw DomainError("no samples for roughness");
  const auto count = static_cast<double>(deviations_mm.size());
  double abs_sum = 0.0, sq_sum = 0.0, cube_sum = 0.0, quart_sum = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  double valley = std::numeric_limits<double>::infinity();
  for (double d : deviations_mm) {
    const double d2 = d * d;
    abs_sum += std::abs(d);
    sq_sum += d2;
    cube_sum += d2 * d;
    quart_sum += d2 * d2;
    peak = std::max(peak, d);
    valley = std::min(valley, d);
  }

  ArealMetrics m;
  m.cell_count = deviations_mm.size();
  const double rms = std::sqrt(sq_sum / count);
  // Residues of mean subtraction on a flat surface are rounding noise.
  if (!(peak - valley > 0.0) || rms == 0.0) return m;

  m.sa = kMicrometresPerMm * abs_sum / count;
  m.sq = kMicrometresPerMm * rms;
  m.sp = kMicrometresPerMm * peak;
  m.sv = -kMicrometresPerMm * valley;
  m.sz = m.sp + m.sv;
  m.ssk = (cube_sum / count) / (rms * rms * rms);
  m.sku = (quart_sum / count) / (rms * rms * rms * rms);
  return m;
}

ArealMetrics metrics_from_heights(std::span<const double> heights_mm) {
  if (heights_mm.empty()) throw DomainError("no samples for roughness");
  const double mean = mean_of(heights_mm);
  double scale = 0.0;
  for (double z : heights_mm) scale = std::max(scale, std::abs(z));
  std::vector<double> deviations;
  deviations.reserve(heights_mm.size());
  const double flat_tolerance = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  bool flat = true;
  for (double z : heights_mm) {
    deviations.push_back(z - mean);
    flat = flat && std::abs(z - mean) <= flat_tolerance;
  }
  if (flat) std::fill(deviations.begin(), deviations.end(), 0.0);
  return metrics_from_deviations(deviations);
}

ArealMetrics areal_metrics(const HeightField& field, const CellRange& roi, Leveling leveling) {
  const GridSpec& spec = field.spec();
  check_roi(spec, roi);
  std::vector<double> heights;
  heights.reserve(roi.size());
  const auto values = field.values();
  for (std::size_t j = roi.j0; j <= roi.j1; ++j)
    for (std::size_t i = roi.i0; i <= roi.i1; ++i) {
      const double z = values[field.flat_index({i, j})];
      if (z == field.stock_height())
        throw DomainError("roughness over unmachined stock is undefined");
      heights.push_back(z);
    }
  if (leveling == Leveling::kMean) return metrics_from_heights(heights);

  std::vector<double> xs, ys;
  xs.reserve(heights.size());
  ys.reserve(heights.size());
  for (std::size_t j = roi.j0; j <= roi.j1; ++j)
    for (std::size_t i = roi.i0; i <= roi.i1; ++i) {
      xs.push_back(spec.x(i));
      ys.push_back(spec.y(j));
    }
  const auto plane = fit_plane(xs, ys, heights);
  std::vector<double> residuals(heights.size());
  for (std::size_t k = 0; k < heights.size(); ++k)
    residuals[k] = heights[k] - (plane[0] + plane[1] * xs[k] + plane[2] * ys[k]);
  return metrics_from_heights(residuals);
}

LineProfile extract_profile(const HeightField& field, ProfileDirection direction,
                            std::optional<std::size_t> index, std::optional<CellRange> roi) {
  const GridSpec& spec = field.spec();
  const CellRange range = roi ? *roi : full_range(spec);
  check_roi(spec, range);

  LineProfile profile;
  profile.direction = direction;
  profile.spacing = spec.spacing;
  const auto values = field.values();
  const auto take = [&](std::size_t i, std::size_t j) {
    const double z = values[field.flat_index({i, j})];
    if (z == field.stock_height()) throw DomainError("profile crosses unmachined stock");
    profile.heights.push_back(z);
  };

  if (direction == ProfileDirection::kFeed) {
    const std::size_t i = index ? *index : static_cast<std::size_t>(std::lround(spec.m / 2.0));
    if (i < range.i0 || i > range.i1) throw DomainError("profile column outside the region");
    profile.index = i;
    profile.origin = spec.y(range.j0);
    for (std::size_t j = range.j0; j <= range.j1; ++j) take(i, j);
  } else {
    const std::size_t j = index ? *index : static_cast<std::size_t>(std::lround(spec.n / 2.0));
    if (j < range.j0 || j > range.j1) throw DomainError("profile row outside the region");
    profile.index = j;
    profile.origin = spec.x(range.i0);
    for (std::size_t i = range.i0; i <= range.i1; ++i) take(i, j);
  }
  return profile;
}

double line_roughness(const LineProfile& profile) {
  if (profile.heights.size() < 2) throw DomainError("line roughness needs at least 2 samples");
  const double mean = mean_of(profile.heights);
  double sum = 0.0;
  double scale = 0.0;
  double spread = 0.0;
  for (double z : profile.heights) {
    sum += std::abs(z - mean);
    scale = std::max(scale, std::abs(z));
    spread = std::max(spread, std::abs(z - mean));
  }
  if (spread <= 64.0 * std::numeric_limits<double>::epsilon() * scale) return 0.0;
  return kMicrometresPerMm * sum / static_cast<double>(profile.heights.size());
}

}  // namespace surftopo
