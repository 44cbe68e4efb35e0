#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "surftopo/engine.hpp"

namespace surftopo {

/// Benchmark sweep configuration. Either a plain simulation config (one case
/// named "base") or
///
///   {"base_config": "sim.json" | {...},
///    "cases": [{"id": "1", "v_c": 170, "f_z": 0.4, "a_p": 0.3}, ...]}
///
/// where every key besides "id" names a sampled parameter as in dataset
/// ranges ("v_c", "f_z", "gamma_f", "eps_a[2]", ...) in the same units.
std::vector<BenchmarkCase> parse_benchmark_config(std::string_view text,
                                                  const std::filesystem::path& base_dir);

std::vector<BenchmarkCase> load_benchmark_config(const std::filesystem::path& path);

}  // namespace surftopo
