#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "surftopo/engine.hpp"
#include "surftopo/errors.hpp"

namespace surftopo {

SimulationConfig scale_time_resolution(const SimulationConfig& config, double multiplier) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier))
    throw ConfigError("bench.scale", "multipliers must be positive");
  SimulationConfig scaled = config;
  scaled.time_step = time_step(config) / multiplier;
  return scaled;
}

std::vector<BenchmarkRow> run_benchmark(std::span<const BenchmarkCase> cases,
                                        std::span<const double> sizes,
                                        const BenchmarkOptions& options) {
  if (sizes.empty()) throw ConfigError("bench.scale", "at least one size is required");
  if (cases.empty()) throw ConfigError("bench.cases", "at least one case is required");

  std::vector<BenchmarkRow> rows;
  for (const auto& bench_case : cases) {
    for (double size : sizes) {
      const SimulationConfig config = scale_time_resolution(bench_case.config, size);

      double best = std::numeric_limits<double>::infinity();
      SimulationResult optimized;
      for (std::size_t r = 0; r < std::max<std::size_t>(options.optimized_repeats, 1); ++r) {
        optimized = simulate(config);
        best = std::min(best, optimized.wall_time_s);
      }

      BenchmarkRow row;
      row.case_id = bench_case.id;
      row.scale = size;
      row.trajectory_points = optimized.counters.trajectory_points;
      row.t_optimized_s = best;
      if (options.run_reference) {
        const SimulationResult reference = simulate_reference(config);
        if (!(reference.field == optimized.field) ||
            reference.trajectory != optimized.trajectory)
          throw KernelMismatchError("optimized and reference kernels disagree on case " +
                                    bench_case.id + " at scale " + std::to_string(size));
        row.t_reference_s = reference.wall_time_s;
        row.speedup = best > 0.0 ? reference.wall_time_s / best : 0.0;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("linear fit needs at least two paired samples");
  const auto count = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mean_x += x[k];
    mean_y += y[k];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mean_x;
    const double dy = y[k] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("linear fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace surftopo
