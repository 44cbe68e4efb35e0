#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "surftopo/errors.hpp"
#include "surftopo/kinematics.hpp"

using namespace surftopo;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

ProcessParameters case_one() {
  auto p = derive_kinematics(170.0, std::nullopt, 0.6, 2, 10.0);
  p.depth_of_cut = 0.5;
  return p;
}

void expect_rotation_block(const Transform4& t, double c00, double c01, double c10, double c11) {
  EXPECT_NEAR(t(0, 0), c00, 1e-15);
  EXPECT_NEAR(t(0, 1), c01, 1e-15);
  EXPECT_NEAR(t(1, 0), c10, 1e-15);
  EXPECT_NEAR(t(1, 1), c11, 1e-15);
}

}  // namespace

TEST(DeriveKinematics, CuttingSpeedChain) {
  const auto p = derive_kinematics(170.0, std::nullopt, 0.6, 2, 10.0);
  EXPECT_NEAR(p.spindle_speed, 5411.268065124442, 1e-9);
  EXPECT_NEAR(p.angular_velocity, 566.6666666666666, 1e-11);
  EXPECT_NEAR(p.feed_speed, 108.22536130248884, 1e-11);
  ASSERT_TRUE(p.cutting_speed.has_value());
  EXPECT_NEAR(*p.cutting_speed, 170.0, 1e-11);
}

TEST(DeriveKinematics, SpindleSpeedAndFeedRate) {
  const double f_z = 125.0 / (4.0 * 995.0);
  EXPECT_NEAR(f_z, 0.031407035, 1e-9);
  const auto p = derive_kinematics(std::nullopt, 995.0, f_z, 4, 50.0);
  EXPECT_NEAR(p.feed_speed, 2.0833333333, 1e-9);
}

TEST(DeriveKinematics, UnitCase) {
  const auto p = derive_kinematics(std::nullopt, 60.0, 1.0, 1, 10.0);
  EXPECT_NEAR(p.angular_velocity, 2.0 * kPi, 1e-14);
  EXPECT_NEAR(p.feed_speed, 1.0, 1e-14);
}

TEST(DeriveKinematics, RequiresExactlyOneSpeed) {
  EXPECT_THROW(derive_kinematics(170.0, 5000.0, 0.6, 2, 10.0), ConfigError);
  EXPECT_THROW(derive_kinematics(std::nullopt, std::nullopt, 0.6, 2, 10.0), ConfigError);
  try {
    derive_kinematics(std::nullopt, 1000.0, -0.1, 2, 10.0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "process.f_z");
  }
}

TEST(EdgeToTool, ZeroRakeFirstTooth) {
  const auto t = edge_to_tool_transform(make_tool(10.0, 5.0, 2), 1);
  expect_rotation_block(t, 1.0, 0.0, 0.0, 1.0);
  EXPECT_EQ(t(2, 2), 1.0);
  EXPECT_EQ(t(0, 3), 5.0);
  EXPECT_EQ(t(1, 3), 0.0);
  EXPECT_EQ(t(2, 3), 0.0);
}

TEST(EdgeToTool, RadialRakeEntries) {
  const auto t = edge_to_tool_transform(make_tool(10.0, 5.0, 2, 0.6 * kDeg), 1);
  EXPECT_NEAR(t(0, 0), 0.9999451693655121, 1e-15);
  EXPECT_NEAR(t(0, 1), 0.010471784116245792, 1e-15);
  EXPECT_NEAR(t(1, 0), -0.010471784116245792, 1e-15);
  EXPECT_EQ(t(0, 3), 5.0);
}

TEST(EdgeToTool, RunoutOffsetsSecondTooth) {
  const auto tool = make_tool(10.0, 5.0, 2, 0.0, 0.0, {0.011, 0.003});
  const auto first = edge_to_tool_transform(tool, 1);
  EXPECT_EQ(first(0, 3), 5.0);
  EXPECT_EQ(first(2, 3), 0.0);
  const auto second = edge_to_tool_transform(tool, 2);
  EXPECT_NEAR(second(0, 3), 5.011, 1e-15);
  EXPECT_EQ(second(1, 3), 0.0);
  EXPECT_NEAR(second(2, 3), 0.003, 1e-15);
  EXPECT_THROW(edge_to_tool_transform(tool, 3), DomainError);
  EXPECT_THROW(edge_to_tool_transform(tool, 0), DomainError);
}

TEST(ToolToSpindle, IdentityAtZeroAngle) {
  EXPECT_EQ(tool_to_spindle_transform(0.0, 1, 4, 566.0, 0.0), Transform4::identity());
}

TEST(ToolToSpindle, SecondOfTwoTeethIsHalfTurn) {
  const auto t = tool_to_spindle_transform(0.0, 2, 2, 566.0, 0.0);
  expect_rotation_block(t, -1.0, std::sin(kPi), -std::sin(kPi), -1.0);
  EXPECT_EQ(t(2, 2), 1.0);
  EXPECT_EQ(t(3, 3), 1.0);
}

TEST(ToolToSpindle, PhaseCancelsRotation) {
  const double omega = 566.6666666666666;
  const auto t = tool_to_spindle_transform(kPi / 2.0, 1, 2, omega, (kPi / 2.0) / omega);
  expect_rotation_block(t, 1.0, 0.0, 0.0, 1.0);
}

TEST(ToolToSpindle, SignLayout) {
  const double theta = 0.3;
  const auto t = tool_to_spindle_transform(theta, 1, 2, 1.0, 0.0);
  expect_rotation_block(t, std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta));
  EXPECT_EQ(t(0, 3), 0.0);
  EXPECT_EQ(t(1, 3), 0.0);
}

TEST(SpindleToWorkpiece, Translations) {
  EXPECT_EQ(spindle_to_workpiece_transform({0, 0, 0}, 5.0, 0.0), Transform4::identity());
  const auto a = spindle_to_workpiece_transform({0.0, -10.0, 0.0}, 108.22536130248884, 0.1);
  EXPECT_NEAR(a(1, 3), 0.822536130248884, 1e-12);
  const auto b = spindle_to_workpiece_transform({3.0, 1.0, 0.5}, 2.0, 2.0);
  EXPECT_EQ(b(0, 3), 3.0);
  EXPECT_EQ(b(1, 3), 5.0);
  EXPECT_EQ(b(2, 3), 0.5);
}

TEST(TransformPoint, PureTranslationAtRest) {
  const auto tool = make_tool(10.0, 5.0, 2);
  auto p = case_one();
  p.initial_position = {1.0, 2.0, 3.0};
  const auto w = transform_point(tool, p, 1, 0.0, {0.0, 0.0, 0.0});
  EXPECT_EQ(w.x, 6.0);
  EXPECT_EQ(w.y, 2.0);
  EXPECT_EQ(w.z, 3.0);
}

TEST(TransformPoint, MatchesClosedFormOracleOnReferenceCase) {
  const auto tool = make_tool(10.0, 5.0, 2, 0.6 * kDeg);
  auto p = case_one();
  p.initial_position = {5.0, -7.2, 0.0};
  const auto w = transform_point(tool, p, 1, 0.001, edge_point(0.0, 5.0));
  const auto o = oracle::oracle_workpiece_point(tool, p, 1, 0.001, 0.0);
  EXPECT_NEAR(w.x, static_cast<double>(o.x), 1e-12);
  EXPECT_NEAR(w.y, static_cast<double>(o.y), 1e-12);
  EXPECT_NEAR(w.z, static_cast<double>(o.z), 1e-12);
}

TEST(TransformPoint, MatchesClosedFormOracleOnRandomInputs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int teeth = 1 + static_cast<int>(u(rng) * 6);
    auto tool = make_tool(5.0 + 40.0 * u(rng), 2.0 + 6.0 * u(rng), teeth,
                          (u(rng) - 0.5) * 20.0 * kDeg, (u(rng) - 0.5) * 20.0 * kDeg);
    for (auto& r : tool.runouts) r = {(u(rng) - 0.5) * 0.05, (u(rng) - 0.5) * 0.05};
    auto p = derive_kinematics(100.0 + 200.0 * u(rng), std::nullopt, 0.05 + 0.5 * u(rng), teeth,
                               tool.cutting_diameter);
    p.phase = u(rng) * 2.0 * kPi;
    p.initial_position = {u(rng) * 10.0, -20.0 * u(rng), u(rng) - 0.5};
    const int tooth = 1 + static_cast<int>(u(rng) * teeth);
    const double t = u(rng) * 0.2;
    const double l = (2.0 * u(rng) - 1.0) * tool.insert_radius;
    const auto w = transform_point(tool, p, tooth, t, edge_point(l, tool.insert_radius));
    const auto o = oracle::oracle_workpiece_point(tool, p, tooth, t, l);
    ASSERT_NEAR(w.x, static_cast<double>(o.x), 1e-11) << trial;
    ASSERT_NEAR(w.y, static_cast<double>(o.y), 1e-11) << trial;
    ASSERT_NEAR(w.z, static_cast<double>(o.z), 1e-11) << trial;
  }
}

TEST(TransformPoint, OppositeTeethAreHalfTurnApart) {
  const auto tool = make_tool(10.0, 5.0, 2, 0.6 * kDeg);
  auto p = case_one();
  p.initial_position = {5.0, -7.0, 0.0};
  const double t = 0.0123;
  const double cx = p.initial_position.x, cy = p.initial_position.y + p.feed_speed * t;
  for (double l : {-2.0, 0.0, 1.5}) {
    const auto a = transform_point(tool, p, 1, t, edge_point(l, 5.0));
    const auto b = transform_point(tool, p, 2, t, edge_point(l, 5.0));
    EXPECT_NEAR(a.x - cx, -(b.x - cx), 1e-12);
    EXPECT_NEAR(a.y - cy, -(b.y - cy), 1e-12);
    EXPECT_NEAR(a.z, b.z, 1e-15);
  }
}

TEST(TransformPoint, OneRevolutionAdvancesByFeedOnly) {
  const auto tool = make_tool(10.0, 5.0, 2);
  auto p = case_one();
  const double period = 2.0 * kPi / p.angular_velocity;
  const auto a = transform_point(tool, p, 1, 0.01, edge_point(1.0, 5.0));
  const auto b = transform_point(tool, p, 1, 0.01 + period, edge_point(1.0, 5.0));
  EXPECT_NEAR(b.x, a.x, 1e-9);
  EXPECT_NEAR(b.y - a.y, p.feed_speed * period, 1e-9);
  EXPECT_NEAR(p.feed_speed * period, 2.0 * 0.6, 1e-12);
}

TEST(Transform4, ProductIsAssociativeAndRotationsOrthonormal) {
  const auto tool = make_tool(10.0, 5.0, 3, 0.2, -0.1, {0.01, 0.02});
  const auto a = spindle_to_workpiece_transform({1.0, 2.0, 3.0}, 7.0, 0.3);
  const auto b = tool_to_spindle_transform(0.4, 2, 3, 100.0, 0.0021);
  const auto c = edge_to_tool_transform(tool, 3);
  const auto left = (a * b) * c;
  const auto right = a * (b * c);
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(left(r, k), right(r, k), 1e-13);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += c(r, k) * c(s, k);
      EXPECT_NEAR(dot, r == s ? 1.0 : 0.0, 1e-15);
    }
  EXPECT_EQ(left(3, 0), 0.0);
  EXPECT_EQ(left(3, 3), 1.0);
}
