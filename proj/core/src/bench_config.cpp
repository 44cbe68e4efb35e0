#include "surftopo/bench_config.hpp"

#include <cmath>

#include "json.hpp"
#include "surftopo/config.hpp"
#include "surftopo/dataset.hpp"
#include "surftopo/errors.hpp"
#include "surftopo/file_util.hpp"

namespace surftopo {

namespace {

using json = nlohmann::json;

// "eps_a[2]" -> (eps_a, 2); other names carry no tooth.
ParameterRange range_for_key(const std::string& key, const std::string& path) {
  ParameterRange r;
  std::string name = key;
  if (const auto open = key.find('['); open != std::string::npos) {
    if (key.back() != ']') throw ConfigError(path, "malformed parameter name");
    name = key.substr(0, open);
    try {
      r.tooth = std::stoi(key.substr(open + 1, key.size() - open - 2));
    } catch (const std::exception&) {
      throw ConfigError(path, "malformed tooth index");
    }
  }
  try {
    r.parameter = parameter_from_name(name);
  } catch (const ConfigError&) {
    throw ConfigError(path, "unknown parameter '" + name + "'");
  }
  const bool runout = r.parameter == Parameter::kRadialRunout ||
                      r.parameter == Parameter::kAxialRunout;
  if (runout != (r.tooth != 0)) throw ConfigError(path, "tooth index only applies to run-outs");
  return r;
}

}  // namespace

std::vector<BenchmarkCase> parse_benchmark_config(std::string_view text,
                                                  const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "expected an object");
  if (!root.contains("cases")) return {{"base", to_simulation_config(parse_config(text))}};

  for (const auto& item : root.items())
    if (item.key() != "base_config" && item.key() != "cases")
      throw ConfigError(item.key(), "unknown key");
  if (!root.contains("base_config")) throw ConfigError("base_config", "missing required field");

  ConfigDocument base;
  const json& source = root.at("base_config");
  try {
    if (source.is_string()) {
      std::filesystem::path p = source.get<std::string>();
      base = load_config(p.is_relative() ? base_dir / p : p);
    } else if (source.is_object()) {
      base = parse_config(source.dump());
    } else {
      throw ConfigError("", "expected a path or an object");
    }
  } catch (const ConfigError& e) {
    throw ConfigError(e.path().empty() ? "base_config" : "base_config." + e.path(), e.message());
  }

  const json& list = root.at("cases");
  if (!list.is_array() || list.empty()) throw ConfigError("cases", "expected a non-empty array");
  std::vector<BenchmarkCase> cases;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string path = "cases[" + std::to_string(k) + "]";
    const json& item = list[k];
    if (!item.is_object()) throw ConfigError(path, "expected an object");
    BenchmarkCase bench_case;
    bench_case.id = std::to_string(k + 1);
    std::vector<ParameterRange> ranges;
    std::vector<double> values;
    for (const auto& field : item.items()) {
      const std::string field_path = path + "." + field.key();
      if (field.key() == "id") {
        if (!field.value().is_string()) throw ConfigError(field_path, "expected a string");
        bench_case.id = field.value().get<std::string>();
        continue;
      }
      if (!field.value().is_number() || !std::isfinite(field.value().get<double>()))
        throw ConfigError(field_path, "expected a finite number");
      ParameterRange r = range_for_key(field.key(), field_path);
      const double v = field.value().get<double>();
      r.lower = v;
      r.upper = v;
      ranges.push_back(r);
      values.push_back(v);
    }
    // Reuse the range checks with a degenerate interval widened by one ulp.
    std::vector<ParameterRange> check = ranges;
    for (auto& r : check) r.upper = std::nextafter(r.upper, INFINITY);
    try {
      if (!check.empty()) validate_ranges(check, base);
      bench_case.config = to_simulation_config(apply_sample(base, ranges, values));
    } catch (const ConfigError& e) {
      throw ConfigError(path, e.what());
    } catch (const DomainError& e) {
      throw ConfigError(path, e.what());
    }
    cases.push_back(std::move(bench_case));
  }
  return cases;
}

std::vector<BenchmarkCase> load_benchmark_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError("", e.what());
  }
  return parse_benchmark_config(text, path.parent_path());
}

}  // namespace surftopo
