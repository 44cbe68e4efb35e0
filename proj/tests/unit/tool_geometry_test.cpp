#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "surftopo/errors.hpp"
#include "surftopo/tool_geometry.hpp"

using namespace surftopo;

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

TEST(EdgePoint, LowestPointIsOrigin) {
  const auto p = edge_point(0.0, 5.0);
  EXPECT_EQ(p.x, 0.0);
  EXPECT_EQ(p.y, 0.0);
  EXPECT_EQ(p.z, 0.0);
}

TEST(EdgePoint, FullRadiusReachesInsertCentreHeight) {
  const auto p = edge_point(5.0, 5.0);
  EXPECT_EQ(p.x, 5.0);
  EXPECT_EQ(p.z, 5.0);
  EXPECT_EQ(edge_point(-5.0, 5.0).z, 5.0);
}

TEST(EdgePoint, HalfRadiusMatchesIndependentEvaluation) {
  const auto p = edge_point(2.5, 5.0);
  EXPECT_EQ(p.x, 2.5);
  EXPECT_NEAR(p.z, 0.6698729810778064, 1e-15);
}

TEST(EdgePoint, OffArcIsRejected) {
  EXPECT_THROW(edge_point(5.0000001, 5.0), DomainError);
  EXPECT_THROW(edge_point(-6.0, 5.0), DomainError);
}

TEST(EdgePoint, SymmetricAndMonotoneInMagnitude) {
  double previous = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double l = 5.0 * k / 100.0;
    const double z = edge_point(l, 5.0).z;
    EXPECT_EQ(z, edge_point(-l, 5.0).z);
    EXPECT_GT(z, previous);
    previous = z;
  }
}

TEST(EffectiveHalfLength, DepthBranchDominates) {
  EXPECT_NEAR(effective_half_length(5.0, 0.5, 0.6, 0.6 * kDeg), 2.179449471770337, 1e-14);
}

TEST(EffectiveHalfLength, FullImmersionGivesRadius) {
  EXPECT_DOUBLE_EQ(effective_half_length(5.0, 5.0, 0.1, 0.0), 5.0);
}

TEST(EffectiveHalfLength, FeedBranchDominates) {
  EXPECT_NEAR(effective_half_length(5.0, 1e-6, 0.6, 0.0), 0.3, 1e-12);
  EXPECT_NEAR(effective_half_length(5.0, 1e-6, 0.6, 0.6 * kDeg), 0.30001645, 1e-8);
}

TEST(EffectiveHalfLength, RejectsOutOfDomainDepth) {
  EXPECT_THROW(effective_half_length(5.0, 5.1, 0.6, 0.0), DomainError);
  EXPECT_THROW(effective_half_length(5.0, 0.0, 0.6, 0.0), DomainError);
  EXPECT_THROW(effective_half_length(5.0, -1.0, 0.6, 0.0), DomainError);
}

TEST(DiscretizeEdge, ThreePointsAreEndpointsAndCentre) {
  const auto tool = make_tool(10.0, 5.0, 2, 0.6 * kDeg);
  const auto edge = discretize_edge(tool, 0.5, 0.6, 3);
  ASSERT_EQ(edge.size(), 3u);
  EXPECT_NEAR(edge.points[0].x, -2.179449471770337, 1e-14);
  EXPECT_EQ(edge.points[1].x, 0.0);
  EXPECT_NEAR(edge.points[2].x, 2.179449471770337, 1e-14);
  EXPECT_EQ(edge.points[0].x, -edge.half_length);
  EXPECT_EQ(edge.points[2].x, edge.half_length);
}

TEST(DiscretizeEdge, TwoPointsAreExactlyTheEndpoints) {
  const auto tool = make_tool(10.0, 5.0, 2);
  const auto edge = discretize_edge(tool, 0.4, 0.4, 2);
  ASSERT_EQ(edge.size(), 2u);
  EXPECT_EQ(edge.points[0].x, -edge.half_length);
  EXPECT_EQ(edge.points[1].x, edge.half_length);
}

TEST(DiscretizeEdge, FullImmersionHeights) {
  const auto tool = make_tool(10.0, 5.0, 2);
  const auto edge = discretize_edge(tool, 5.0, 0.1, 5);
  const double expected[] = {5.0, 0.6698729810778064, 0.0, 0.6698729810778064, 5.0};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(edge.points[k].z, expected[k], 1e-14) << k;
}

TEST(DiscretizeEdge, UniformSpacingAndSymmetry) {
  const auto tool = make_tool(10.0, 5.0, 2);
  const auto edge = discretize_edge(tool, 0.5, 0.6, 101);
  const double step = 2.0 * edge.half_length / 100.0;
  for (std::size_t p = 0; p < edge.size(); ++p) {
    EXPECT_NEAR(edge.points[p].x, -edge.half_length + step * p, 1e-13);
    EXPECT_NEAR(edge.points[p].x, -edge.points[100 - p].x, 1e-13);
    EXPECT_EQ(edge.points[p].y, 0.0);
  }
}

TEST(DiscretizeEdge, RejectsTooFewPoints) {
  const auto tool = make_tool(10.0, 5.0, 2);
  EXPECT_THROW(discretize_edge(tool, 0.5, 0.6, 1), DomainError);
  EXPECT_THROW(discretize_edge(tool, 5.5, 0.6, 5), DomainError);
}

TEST(ToolDefinition, ValidationRejectsBadTools) {
  EXPECT_THROW(make_tool(0.0, 5.0, 2).validate(), DomainError);
  EXPECT_THROW(make_tool(10.0, -1.0, 2).validate(), DomainError);
  EXPECT_THROW(make_tool(10.0, 5.0, 0).validate(), DomainError);
  EXPECT_THROW(make_tool(10.0, 5.0, 2, 1.6).validate(), DomainError);
  auto tool = make_tool(10.0, 5.0, 2);
  tool.runouts.pop_back();
  EXPECT_THROW(tool.validate(), DomainError);
  EXPECT_NO_THROW(make_tool(10.0, 5.0, 2, 0.01, 0.0, {0.011, 0.003}).validate());
}

TEST(ToolDefinition, MaxRadialOffsetScalesWithToothIndex) {
  auto tool = make_tool(10.0, 5.0, 3);
  tool.runouts = {{0.5, 0.0}, {-0.026, 0.0}, {0.01, 0.0}};
  EXPECT_DOUBLE_EQ(tool.max_radial_offset(), 0.026);
}

TEST(DefaultEdgePointCount, QuarterSpacingResolution) {
  EXPECT_EQ(default_edge_point_count(1.0, 0.01), 401u);
  EXPECT_EQ(default_edge_point_count(1e-6, 1.0), 2u);
}
