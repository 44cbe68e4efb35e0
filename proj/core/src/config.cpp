#include "surftopo/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "surftopo/errors.hpp"

namespace surftopo {

namespace {

using json = nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMaxGridNodes = 2.5e8;

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!keys.contains(item.key())) throw ConfigError(join(path, item.key()), "unknown key");
}

double number_at(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

std::optional<double> optional_number(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return number_at(obj.at(key), join(path, key));
}

double required_number(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing required field");
  return number_at(obj.at(key), join(path, key));
}

long long integer_at(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ConfigError(path, "expected an integer");
  return value.get<long long>();
}

// Angle given either in degrees (key_deg) or radians (key_rad).
std::optional<double> optional_angle(const json& obj, const std::string& path,
                                     const std::string& stem) {
  const std::string deg_key = stem + "_deg";
  const std::string rad_key = stem + "_rad";
  const bool has_deg = obj.contains(deg_key);
  const bool has_rad = obj.contains(rad_key);
  if (has_deg && has_rad)
    throw ConfigError(join(path, stem), "give either " + deg_key + " or " + rad_key);
  if (has_deg) return number_at(obj.at(deg_key), join(path, deg_key)) * kDegToRad;
  if (has_rad) return number_at(obj.at(rad_key), join(path, rad_key));
  return std::nullopt;
}

std::pair<double, double> range_at(const json& obj, const std::string& path, const char* key) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) throw ConfigError(p, "missing required field");
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2) throw ConfigError(p, "expected [min, max]");
  const double lo = number_at(v[0], p + "[0]");
  const double hi = number_at(v[1], p + "[1]");
  if (!(hi > lo)) throw ConfigError(p, "max must exceed min");
  return {lo, hi};
}

Runout runout_at(const json& v, const std::string& path, double insert_radius) {
  reject_unknown(v, path, {"radial", "axial"});
  Runout r;
  r.radial = optional_number(v, path, "radial").value_or(0.0);
  r.axial = optional_number(v, path, "axial").value_or(0.0);
  if (!(std::abs(r.radial) < insert_radius))
    throw ConfigError(join(path, "radial"), "run-out must be smaller than the insert radius");
  if (!(std::abs(r.axial) < insert_radius))
    throw ConfigError(join(path, "axial"), "run-out must be smaller than the insert radius");
  return r;
}

ToolDefinition parse_tool(const json& obj) {
  const std::string path = "tool";
  reject_unknown(obj, path,
                 {"diameter", "insert_radius", "teeth", "radial_rake_deg", "radial_rake_rad",
                  "axial_rake_deg", "axial_rake_rad", "runout", "runouts"});
  ToolDefinition tool;
  tool.cutting_diameter = required_number(obj, path, "diameter");
  if (!(tool.cutting_diameter > 0.0 && tool.cutting_diameter <= 10000.0))
    throw ConfigError("tool.diameter", "must lie in (0, 10000] mm");
  tool.insert_radius = required_number(obj, path, "insert_radius");
  if (!(tool.insert_radius > 0.0 && tool.insert_radius <= 1000.0))
    throw ConfigError("tool.insert_radius", "must lie in (0, 1000] mm");
  if (!obj.contains("teeth")) throw ConfigError("tool.teeth", "missing required field");
  const long long teeth = integer_at(obj.at("teeth"), "tool.teeth");
  if (teeth < 1 || teeth > 1000) throw ConfigError("tool.teeth", "must lie in [1, 1000]");
  tool.tooth_count = static_cast<int>(teeth);

  const double half_pi = std::numbers::pi / 2.0;
  tool.radial_rake = optional_angle(obj, path, "radial_rake").value_or(0.0);
  if (!(std::abs(tool.radial_rake) < half_pi))
    throw ConfigError("tool.radial_rake", "must lie strictly between -90 and 90 degrees");
  tool.axial_rake = optional_angle(obj, path, "axial_rake").value_or(0.0);
  if (!(std::abs(tool.axial_rake) < half_pi))
    throw ConfigError("tool.axial_rake", "must lie strictly between -90 and 90 degrees");

  if (obj.contains("runout") && obj.contains("runouts"))
    throw ConfigError("tool.runouts", "give either runout or runouts");
  if (obj.contains("runouts")) {
    const json& list = obj.at("runouts");
    if (!list.is_array() || list.size() != static_cast<std::size_t>(teeth))
      throw ConfigError("tool.runouts", "expected one entry per tooth");
    for (std::size_t k = 0; k < list.size(); ++k)
      tool.runouts.push_back(
          runout_at(list[k], "tool.runouts[" + std::to_string(k) + "]", tool.insert_radius));
  } else {
    const Runout shared = obj.contains("runout")
                              ? runout_at(obj.at("runout"), "tool.runout", tool.insert_radius)
                              : Runout{};
    tool.runouts.assign(static_cast<std::size_t>(teeth), shared);
  }
  return tool;
}

void check_feed_length(const ToolDefinition& tool, double feed_per_tooth) {
  if (feed_per_tooth / (2.0 * std::cos(tool.radial_rake)) > tool.insert_radius)
    throw ConfigError("process.f_z", "feed per tooth exceeds the insert diameter");
}

ProcessParameters parse_process(const json& obj, const ToolDefinition& tool,
                                std::optional<Vec3>& initial_position) {
  const std::string path = "process";
  reject_unknown(obj, path,
                 {"v_c", "n_rpm", "f_z", "v_f", "a_p", "phase_deg", "phase_rad",
                  "initial_position"});
  const auto v_c = optional_number(obj, path, "v_c");
  const auto n_rpm = optional_number(obj, path, "n_rpm");
  if (v_c && !(*v_c > 0.0 && *v_c <= 1e5))
    throw ConfigError("process.v_c", "must lie in (0, 1e5] m/min");
  if (n_rpm && !(*n_rpm > 0.0 && *n_rpm <= 1e6))
    throw ConfigError("process.n_rpm", "must lie in (0, 1e6] rev/min");
  if (!v_c && !n_rpm) throw ConfigError("process.v_c", "give v_c or n_rpm");

  double spindle = 0.0;
  if (v_c) {
    spindle = 1000.0 * *v_c / (std::numbers::pi * tool.cutting_diameter);
    if (n_rpm && std::abs(spindle - *n_rpm) > 1e-9 * std::max(1.0, *n_rpm))
      throw ConfigError("process.v_c",
                        "process.v_c and process.n_rpm are inconsistent for this diameter");
  } else {
    spindle = *n_rpm;
  }

  const auto f_z = optional_number(obj, path, "f_z");
  const auto v_f = optional_number(obj, path, "v_f");  // mm/min
  if (f_z && !(*f_z > 0.0 && *f_z <= 100.0))
    throw ConfigError("process.f_z", "must lie in (0, 100] mm/tooth");
  if (v_f && !(*v_f > 0.0)) throw ConfigError("process.v_f", "must be positive");
  if (!f_z && !v_f) throw ConfigError("process.f_z", "give f_z or v_f");
  const double teeth = static_cast<double>(tool.tooth_count);
  double feed_per_tooth = f_z ? *f_z : (*v_f / 60.0) * 60.0 / (teeth * spindle);
  if (f_z && v_f) {
    const double implied = *f_z * teeth * spindle / 60.0;
    if (std::abs(implied - *v_f / 60.0) > 1e-9)
      throw ConfigError("process.f_z", "process.f_z and process.v_f are inconsistent");
  }
  check_feed_length(tool, feed_per_tooth);

  ProcessParameters p =
      derive_kinematics(std::nullopt, spindle, feed_per_tooth, tool.tooth_count,
                        tool.cutting_diameter);
  p.depth_of_cut = required_number(obj, path, "a_p");
  if (!(p.depth_of_cut > 0.0)) throw ConfigError("process.a_p", "must be positive");
  if (p.depth_of_cut > tool.insert_radius)
    throw ConfigError("process.a_p", "must not exceed the insert radius");
  p.phase = optional_angle(obj, path, "phase").value_or(0.0);

  if (obj.contains("initial_position")) {
    const json& v = obj.at("initial_position");
    if (!v.is_array() || v.size() != 3)
      throw ConfigError("process.initial_position", "expected [x0, y0, z0]");
    initial_position = Vec3{number_at(v[0], "process.initial_position[0]"),
                            number_at(v[1], "process.initial_position[1]"),
                            number_at(v[2], "process.initial_position[2]")};
  }
  return p;
}

GridSpec parse_grid(const json& obj) {
  const std::string path = "grid";
  reject_unknown(obj, path, {"spacing", "x_range", "y_range"});
  const double spacing = required_number(obj, path, "spacing");
  if (!(spacing > 0.0)) throw ConfigError("grid.spacing", "must be positive");
  const auto [x0, x1] = range_at(obj, path, "x_range");
  const auto [y0, y1] = range_at(obj, path, "y_range");
  const double nodes = (std::round((x1 - x0) / spacing) + 1.0) * (std::round((y1 - y0) / spacing) + 1.0);
  if (nodes > kMaxGridNodes) throw ConfigError("grid.spacing", "grid would exceed 2.5e8 nodes");
  try {
    return GridSpec::from_extents(spacing, x0, x1, y0, y1);
  } catch (const DomainError& e) {
    throw ConfigError("grid", e.what());
  }
}

EngineOptions parse_engine(const json& obj) {
  const std::string path = "engine";
  reject_unknown(obj, path,
                 {"max_angle_step_deg", "max_angle_step_rad", "time_step", "edge_points",
                  "workers", "record_trajectory", "time_span"});
  EngineOptions e;
  e.max_angle_step = optional_angle(obj, path, "max_angle_step");
  if (e.max_angle_step && !(*e.max_angle_step > 0.0 && *e.max_angle_step <= std::numbers::pi))
    throw ConfigError("engine.max_angle_step", "must lie in (0, 180] degrees");
  e.time_step = optional_number(obj, path, "time_step");
  if (e.time_step && !(*e.time_step > 0.0)) throw ConfigError("engine.time_step", "must be positive");
  if (obj.contains("edge_points")) {
    const json& v = obj.at("edge_points");
    if (!(v.is_string() && v.get<std::string>() == "auto")) {
      const long long n = integer_at(v, "engine.edge_points");
      if (n < 2 || n > 10'000'000)
        throw ConfigError("engine.edge_points", "must lie in [2, 1e7] or be \"auto\"");
      e.edge_points = static_cast<std::size_t>(n);
    }
  }
  if (obj.contains("workers")) {
    const long long w = integer_at(obj.at("workers"), "engine.workers");
    if (w < 1 || w > 1024) throw ConfigError("engine.workers", "must lie in [1, 1024]");
    e.workers = static_cast<unsigned>(w);
  }
  if (obj.contains("record_trajectory")) {
    if (!obj.at("record_trajectory").is_boolean())
      throw ConfigError("engine.record_trajectory", "expected a boolean");
    e.record_trajectory = obj.at("record_trajectory").get<bool>();
  }
  if (obj.contains("time_span")) {
    const json& v = obj.at("time_span");
    if (!v.is_array() || v.size() != 2)
      throw ConfigError("engine.time_span", "expected [start, end]");
    TimeSpan span{number_at(v[0], "engine.time_span[0]"), number_at(v[1], "engine.time_span[1]")};
    if (!(span.start >= 0.0 && span.end >= span.start))
      throw ConfigError("engine.time_span", "must satisfy 0 <= start <= end");
    e.time_span = span;
  }
  return e;
}

OutputOptions parse_output(const json& obj) {
  reject_unknown(obj, "output", {"directory", "formats"});
  OutputOptions out;
  if (obj.contains("directory")) {
    if (!obj.at("directory").is_string()) throw ConfigError("output.directory", "expected a string");
    out.directory = obj.at("directory").get<std::string>();
  }
  if (obj.contains("formats")) {
    const json& list = obj.at("formats");
    if (!list.is_array()) throw ConfigError("output.formats", "expected an array");
    static const std::set<std::string> known{"srtf", "csv", "pgm", "metrics", "trajectory"};
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string p = "output.formats[" + std::to_string(k) + "]";
      if (!list[k].is_string()) throw ConfigError(p, "expected a string");
      const auto name = list[k].get<std::string>();
      if (!known.contains(name)) throw ConfigError(p, "unknown format '" + name + "'");
      out.formats.push_back(name);
    }
  }
  return out;
}

}  // namespace

Vec3 default_initial_position(const ToolDefinition& tool, const ProcessParameters& process,
                              const GridSpec& grid) {
  const double half_length = effective_half_length(tool.insert_radius, process.depth_of_cut,
                                                   process.feed_per_tooth, tool.radial_rake);
  const double margin = tool.cutting_diameter / 2.0 + tool.max_radial_offset() + half_length;
  return {(grid.x_min + grid.x_max) / 2.0, grid.y_min - margin, 0.0};
}

void resolve_derived(ConfigDocument& doc) {
  const double phase = doc.process.phase;
  const double depth = doc.process.depth_of_cut;
  ProcessParameters p = derive_kinematics(std::nullopt, doc.process.spindle_speed,
                                          doc.process.feed_per_tooth, doc.tool.tooth_count,
                                          doc.tool.cutting_diameter);
  p.phase = phase;
  p.depth_of_cut = depth;
  if (!(p.depth_of_cut > 0.0)) throw ConfigError("process.a_p", "must be positive");
  if (p.depth_of_cut > doc.tool.insert_radius)
    throw ConfigError("process.a_p", "must not exceed the insert radius");
  check_feed_length(doc.tool, p.feed_per_tooth);
  try {
    doc.tool.validate();
  } catch (const DomainError& e) {
    throw ConfigError("tool", e.what());
  }
  p.initial_position = doc.initial_position
                           ? *doc.initial_position
                           : default_initial_position(doc.tool, p, doc.grid);
  doc.process = p;
}

ConfigDocument parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(root, "", {"tool", "process", "grid", "engine", "output"});
  if (!root.contains("tool")) throw ConfigError("tool", "missing required block");
  if (!root.contains("process")) throw ConfigError("process", "missing required block");
  if (!root.contains("grid")) throw ConfigError("grid", "missing required block");

  ConfigDocument doc;
  doc.tool = parse_tool(root.at("tool"));
  doc.process = parse_process(root.at("process"), doc.tool, doc.initial_position);
  doc.grid = parse_grid(root.at("grid"));
  if (root.contains("engine")) doc.engine = parse_engine(root.at("engine"));
  if (root.contains("output")) doc.output = parse_output(root.at("output"));
  resolve_derived(doc);
  return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open configuration file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ConfigDocument& doc) {
  json root;
  json runouts = json::array();
  for (const auto& r : doc.tool.runouts) runouts.push_back({{"radial", r.radial}, {"axial", r.axial}});
  root["tool"] = {{"diameter", doc.tool.cutting_diameter},
                  {"insert_radius", doc.tool.insert_radius},
                  {"teeth", doc.tool.tooth_count},
                  {"radial_rake_rad", doc.tool.radial_rake},
                  {"axial_rake_rad", doc.tool.axial_rake},
                  {"runouts", runouts}};
  json process = {{"n_rpm", doc.process.spindle_speed},
                  {"f_z", doc.process.feed_per_tooth},
                  {"a_p", doc.process.depth_of_cut},
                  {"phase_rad", doc.process.phase}};
  if (doc.initial_position)
    process["initial_position"] = {doc.initial_position->x, doc.initial_position->y,
                                   doc.initial_position->z};
  root["process"] = process;
  root["grid"] = {{"spacing", doc.grid.spacing},
                  {"x_range", {doc.grid.x_min, doc.grid.x_max}},
                  {"y_range", {doc.grid.y_min, doc.grid.y_max}}};
  json engine = {{"workers", doc.engine.workers},
                 {"record_trajectory", doc.engine.record_trajectory}};
  if (doc.engine.max_angle_step) engine["max_angle_step_rad"] = *doc.engine.max_angle_step;
  if (doc.engine.time_step) engine["time_step"] = *doc.engine.time_step;
  engine["edge_points"] = doc.engine.edge_points ? json(*doc.engine.edge_points) : json("auto");
  if (doc.engine.time_span)
    engine["time_span"] = {doc.engine.time_span->start, doc.engine.time_span->end};
  root["engine"] = engine;
  root["output"] = {{"directory", doc.output.directory}, {"formats", doc.output.formats}};
  return root.dump(2) + "\n";
}

SimulationConfig to_simulation_config(const ConfigDocument& doc) {
  SimulationConfig config;
  config.tool = doc.tool;
  config.process = doc.process;
  config.grid = doc.grid;
  config.edge_point_count = doc.engine.edge_points;
  config.max_angle_step = doc.engine.max_angle_step;
  config.time_step = doc.engine.time_step;
  config.time_span = doc.engine.time_span;
  config.record_trajectory = doc.engine.record_trajectory;
  config.worker_count = doc.engine.workers;
  return config;
}

}  // namespace surftopo
