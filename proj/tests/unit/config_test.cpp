#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "json.hpp"
#include "surftopo/config.hpp"
#include "surftopo/errors.hpp"

using namespace surftopo;
using nlohmann::json;

namespace {

json case_one() {
  return json::parse(R"({
    "tool": {"diameter": 10.0, "insert_radius": 5.0, "teeth": 2,
             "radial_rake_deg": 0.6, "axial_rake_deg": 0.0},
    "process": {"v_c": 170, "f_z": 0.6, "a_p": 0.5},
    "grid": {"spacing": 0.01, "x_range": [0, 10], "y_range": [0, 5]}
  })");
}

std::string error_path(const json& doc) {
  try {
    parse_config(doc.dump());
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

}  // namespace

TEST(ParseConfig, ConvertsIndustryUnits) {
  const auto doc = parse_config(case_one().dump());
  EXPECT_NEAR(doc.process.angular_velocity, 566.6666666666666, 1e-9);
  EXPECT_NEAR(doc.process.feed_speed, 108.22536130248884, 1e-9);
  EXPECT_NEAR(doc.tool.radial_rake, 0.6 * std::numbers::pi / 180.0, 1e-17);
  EXPECT_EQ(doc.tool.runouts.size(), 2u);
  EXPECT_EQ(doc.grid.m, 1000u);
  EXPECT_FALSE(doc.initial_position);
  EXPECT_DOUBLE_EQ(doc.process.initial_position.x, 5.0);
  EXPECT_LT(doc.process.initial_position.y, -7.0);
}

TEST(ParseConfig, FeedRateAlternative) {
  auto j = json::parse(R"({
    "tool": {"diameter": 50, "insert_radius": 6, "teeth": 4},
    "process": {"n_rpm": 995, "v_f": 125, "a_p": 2.5},
    "grid": {"spacing": 0.05, "x_range": [0, 1], "y_range": [0, 1]}
  })");
  const auto doc = parse_config(j.dump());
  EXPECT_NEAR(doc.process.feed_speed, 2.0833333333, 1e-9);
  EXPECT_NEAR(doc.process.feed_per_tooth, 0.031407035, 1e-9);
}

TEST(ParseConfig, RejectsBadValuesWithPaths) {
  auto j = case_one();
  j["process"]["f_z"] = -0.1;
  EXPECT_EQ(error_path(j), "process.f_z");

  j = case_one();
  j["process"]["a_p"] = 5.5;
  EXPECT_EQ(error_path(j), "process.a_p");

  j = case_one();
  j["tool"]["teeth"] = 2.5;
  EXPECT_EQ(error_path(j), "tool.teeth");

  j = case_one();
  j["grid"]["x_range"] = {3, 1};
  EXPECT_EQ(error_path(j), "grid.x_range");

  j = case_one();
  j["tool"]["runouts"] = json::array({{{"radial", 0.0}}});
  EXPECT_EQ(error_path(j), "tool.runouts");

  j = case_one();
  j["engine"] = {{"workers", 0}};
  EXPECT_EQ(error_path(j), "engine.workers");
}

TEST(ParseConfig, RejectsUnknownKeys) {
  auto j = case_one();
  j["process"]["fz"] = 0.6;
  EXPECT_EQ(error_path(j), "process.fz");
  j = case_one();
  j["extra"] = 1;
  EXPECT_EQ(error_path(j), "extra");
}

TEST(ParseConfig, InconsistentSpeedsCiteBothFields) {
  auto j = case_one();
  j["process"]["n_rpm"] = 5000;
  try {
    parse_config(j.dump());
    FAIL();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("process.v_c"), std::string::npos);
    EXPECT_NE(what.find("process.n_rpm"), std::string::npos);
  }
  j["process"]["n_rpm"] = 1000.0 * 170.0 / (std::numbers::pi * 10.0);
  EXPECT_NO_THROW(parse_config(j.dump()));
}

TEST(ParseConfig, MalformedJson) {
  EXPECT_THROW(parse_config("{\"tool\": "), ConfigError);
  EXPECT_THROW(parse_config("[]"), ConfigError);
}

TEST(SerializeConfig, RoundTripsRandomDocuments) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto j = case_one();
    const int teeth = 1 + static_cast<int>(u(rng) * 5);
    j["tool"]["teeth"] = teeth;
    j["tool"]["diameter"] = 5.0 + 60.0 * u(rng);
    j["tool"]["insert_radius"] = 1.0 + 7.0 * u(rng);
    j["tool"]["radial_rake_deg"] = (u(rng) - 0.5) * 30.0;
    j["tool"].erase("axial_rake_deg");
    j["tool"]["axial_rake_rad"] = (u(rng) - 0.5) * 0.3;
    json runouts = json::array();
    for (int k = 0; k < teeth; ++k)
      runouts.push_back({{"radial", (u(rng) - 0.5) * 0.05}, {"axial", (u(rng) - 0.5) * 0.02}});
    j["tool"]["runouts"] = runouts;
    j["process"] = {{"v_c", 50.0 + 300.0 * u(rng)},
                    {"f_z", 0.01 + 0.5 * u(rng)},
                    {"a_p", 0.05 + 0.9 * u(rng)},
                    {"phase_deg", 360.0 * u(rng)}};
    if (u(rng) < 0.5) j["process"]["initial_position"] = {u(rng), -u(rng) * 20.0, 0.0};
    j["grid"] = {{"spacing", 0.003 + 0.1 * u(rng)},
                 {"x_range", {-u(rng), 1.0 + u(rng)}},
                 {"y_range", {0.0, 1.0 + u(rng)}}};
    j["engine"] = {{"workers", 1 + static_cast<int>(u(rng) * 8)},
                   {"record_trajectory", u(rng) < 0.5}};
    if (u(rng) < 0.5) j["engine"]["max_angle_step_deg"] = 0.1 + u(rng);
    if (u(rng) < 0.3) j["engine"]["time_step"] = 1e-6 * (1.0 + u(rng));
    if (u(rng) < 0.5) j["engine"]["edge_points"] = 10 + static_cast<int>(u(rng) * 100);
    if (u(rng) < 0.3) j["engine"]["time_span"] = {0.0, u(rng)};
    j["output"] = {{"directory", "out"}, {"formats", {"srtf", "csv"}}};

    const auto doc = parse_config(j.dump());
    const auto text = serialize_config(doc);
    EXPECT_EQ(parse_config(text), doc) << text;
    EXPECT_EQ(serialize_config(parse_config(text)), text);
  }
}

TEST(ToSimulationConfig, CarriesEngineOptions) {
  auto j = case_one();
  j["engine"] = {{"workers", 3}, {"edge_points", 17}, {"time_step", 2e-6}};
  const auto c = to_simulation_config(parse_config(j.dump()));
  EXPECT_EQ(c.worker_count, 3u);
  EXPECT_EQ(c.edge_point_count, 17u);
  EXPECT_EQ(c.time_step, 2e-6);
  EXPECT_NO_THROW(c.validate());
}
