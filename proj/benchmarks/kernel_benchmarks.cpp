#include <benchmark/benchmark.h>

#include "oracles.hpp"
#include "surftopo/engine.hpp"
#include "surftopo/kinematics.hpp"

using namespace surftopo;

namespace {

// A 2 x 1 mm patch of the 10 mm, 2-tooth cutter; range(0) sets the spacing in um.
SimulationConfig patch(benchmark::State& state) {
  const double spacing = static_cast<double>(state.range(0)) * 1e-3;
  return oracle::flat_config(10.0, 5.0, 2, 170.0, 0.6, 0.5,
                             GridSpec::from_extents(spacing, 4.0, 6.0, 0.0, 1.0));
}

void count_points(benchmark::State& state, const SimulationResult& r) {
  state.counters["points"] = benchmark::Counter(
      static_cast<double>(r.counters.trajectory_points) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}

void BM_OptimizedKernel(benchmark::State& state) {
  auto config = patch(state);
  config.worker_count = 1;
  SimulationResult r;
  for (auto _ : state) {
    r = simulate(config);
    benchmark::DoNotOptimize(r.field.values().data());
  }
  count_points(state, r);
}
BENCHMARK(BM_OptimizedKernel)->Arg(50)->Arg(20)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ReferenceKernel(benchmark::State& state) {
  const auto config = patch(state);
  SimulationResult r;
  for (auto _ : state) {
    r = simulate_reference(config);
    benchmark::DoNotOptimize(r.field.values().data());
  }
  count_points(state, r);
}
BENCHMARK(BM_ReferenceKernel)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_TransformChain(benchmark::State& state) {
  const auto config = oracle::flat_config(10.0, 5.0, 2, 170.0, 0.6, 0.5,
                                          GridSpec::from_extents(0.01, 0.0, 1.0, 0.0, 1.0));
  double t = 0.0;
  for (auto _ : state) {
    const auto m = edge_to_workpiece_transform(config.tool, config.process, 2, t);
    benchmark::DoNotOptimize(m);
    t += 1e-6;
  }
}
BENCHMARK(BM_TransformChain);

void BM_TransformPoint(benchmark::State& state) {
  const auto config = oracle::flat_config(10.0, 5.0, 2, 170.0, 0.6, 0.5,
                                          GridSpec::from_extents(0.01, 0.0, 1.0, 0.0, 1.0));
  const auto p = edge_point(1.0, 5.0);
  double t = 0.0;
  for (auto _ : state) {
    const auto w = transform_point(config.tool, config.process, 1, t, p);
    benchmark::DoNotOptimize(w);
    t += 1e-6;
  }
}
BENCHMARK(BM_TransformPoint);

}  // namespace

BENCHMARK_MAIN();
