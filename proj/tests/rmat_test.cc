#include "terahac/rmat.h"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "terahac/graph_builders.h"
#include "test_util.h"

namespace terahac {
namespace {

using ::terahac::testing::ValueOrDie;

TEST(RmatTest, Deterministic) {
  RmatOptions options{.scale = 10, .seed = 7};
  ClusterGraph a = ValueOrDie(RmatGraph(options));
  ClusterGraph b = ValueOrDie(RmatGraph(options));
  std::ostringstream sa, sb;
  WriteEdgeList(a, sa);
  WriteEdgeList(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
  options.seed = 8;
  std::ostringstream sc;
  WriteEdgeList(ValueOrDie(RmatGraph(options)), sc);
  EXPECT_NE(sa.str(), sc.str());
}

TEST(RmatTest, SampleCountsAndDedup) {
  RmatReport report;
  auto edges = ValueOrDie(RmatEdges({.scale = 12, .edge_factor = 50, .seed = 1}, &report));
  EXPECT_EQ(report.samples, 50 << 12);
  EXPECT_EQ(report.unique_edges, static_cast<int64_t>(edges.size()));
  EXPECT_LT(report.unique_edges, report.samples - report.self_loops);
  for (size_t i = 0; i < edges.size(); ++i) {
    EXPECT_LT(edges[i].first, edges[i].second);
    EXPECT_LT(edges[i].second, 1 << 12);
    if (i > 0) {
      EXPECT_LT(edges[i - 1], edges[i]);
    }
  }
}

TEST(RmatTest, SkewFollowsQuadrants) {
  // With a = 0.6 the low half of the id space collects most endpoints.
  auto edges = ValueOrDie(RmatEdges({.scale = 12, .edge_factor = 10, .seed = 2}));
  int64_t low = 0;
  for (const auto& [u, v] : edges) low += (u < 2048) + (v < 2048);
  EXPECT_GT(low, static_cast<int64_t>(edges.size()));
}

TEST(RmatTest, DegreeWeights) {
  RmatReport report;
  ClusterGraph g = ValueOrDie(RmatGraph({.scale = 9, .edge_factor = 8, .seed = 3}, &report));
  EXPECT_EQ(g.NumEdges(), report.unique_edges - report.isolated_edges_dropped);
  std::unordered_map<ClusterId, int64_t> degree;
  for (const WeightedEdge& e : g.LinkageEdges()) {
    ++degree[e.u];
    ++degree[e.v];
  }
  for (const WeightedEdge& e : g.LinkageEdges()) {
    EXPECT_DOUBLE_EQ(e.weight, 1.0 / std::log(degree[e.u] + degree[e.v]));
  }
}

TEST(RmatTest, ParameterErrors) {
  EXPECT_FALSE(RmatEdges({.scale = 0}).ok());
  EXPECT_FALSE(RmatEdges({.scale = kMaxRmatScale + 1}).ok());
  EXPECT_FALSE(RmatEdges({.scale = 4, .edge_factor = 0}).ok());
  EXPECT_FALSE(RmatEdges({.scale = 4, .a = 0.5}).ok());
  EXPECT_FALSE(RmatEdges({.scale = 4, .a = 0.7, .b = -0.1, .c = 0.3, .d = 0.1}).ok());
}

}  // namespace
}  // namespace terahac
