#include "terahac/cluster_graph.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace terahac {
namespace {

using ::terahac::testing::MakeGraph;
using ::terahac::testing::OracleGoodness;
using ::terahac::testing::PathGraph;
using ::terahac::testing::RandomGraph;
using ::terahac::testing::ValueOrDie;
using ::testing::DoubleEq;
using ::testing::ElementsAre;

ClusterGraph TwoClusters(int64_t size_u, int64_t size_v, double cut) {
  std::vector<ClusterGraph::Vertex> vertices(2);
  vertices[0] = {.id = 0, .size = size_u, .min_merge = 0.5,
                 .neighbors = {{1, cut}}};
  vertices[1] = {.id = 1, .size = size_v, .min_merge = size_v == 1 ? kInf : 0.5,
                 .neighbors = {{0, cut}}};
  return ValueOrDie(ClusterGraph::FromVertices(vertices, {}));
}

TEST(ClusterGraphTest, FromEdgesFoldsDuplicates) {
  ClusterGraph g = MakeGraph({{0, 1, 0.4}, {1, 0, 0.6}});
  EXPECT_EQ(g.NumVertices(), 2);
  EXPECT_EQ(g.NumEdges(), 1);
  EXPECT_THAT(ValueOrDie(g.LinkageWeight(0, 1)), DoubleEq(1.0));
  EXPECT_EQ(g.MinMerge(0), kInf);
  EXPECT_EQ(g.Size(1), 1);
  EXPECT_OK(g.Validate());
}

TEST(ClusterGraphTest, FromEdgesRejectsBadInput) {
  std::vector<ClusterId> none;
  std::vector<WeightedEdge> loop = {{3, 3, 1.0}};
  EXPECT_FALSE(ClusterGraph::FromEdges(none, loop).ok());
  std::vector<WeightedEdge> zero = {{0, 1, 0.0}};
  EXPECT_FALSE(ClusterGraph::FromEdges(none, zero).ok());
}

TEST(ClusterGraphTest, LinkageWeightOfSingletons) {
  ClusterGraph g = MakeGraph({{0, 1, 1.0}});
  EXPECT_THAT(ValueOrDie(g.LinkageWeight(0, 1)), DoubleEq(1.0));
}

TEST(ClusterGraphTest, LinkageWeightDividesBySizes) {
  EXPECT_THAT(ValueOrDie(TwoClusters(2, 1, 0.9).LinkageWeight(0, 1)),
              DoubleEq(0.45));
  EXPECT_THAT(ValueOrDie(TwoClusters(2, 3, 3.0).LinkageWeight(1, 0)),
              DoubleEq(0.5));
}

TEST(ClusterGraphTest, LinkageWeightOfMissingEdgeFails) {
  ClusterGraph g = PathGraph();
  EXPECT_EQ(g.LinkageWeight(0, 2).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(ClusterGraphTest, Wmax) {
  ClusterGraph g = PathGraph();
  EXPECT_DOUBLE_EQ(g.Wmax(1), 1.0);
  EXPECT_DOUBLE_EQ(g.Wmax(2), 0.9);
  ClusterGraph isolated = MakeGraph({{0, 1, 1.0}}, {0, 1, 7});
  EXPECT_EQ(isolated.Wmax(7), 0.0);
}

TEST(ClusterGraphTest, MergeUpdatesWmaxAndMinMerge) {
  ClusterGraph g = PathGraph();
  EXPECT_THAT(ValueOrDie(g.Merge(0, 1, 3)), DoubleEq(1.0));
  EXPECT_FALSE(g.Contains(0));
  EXPECT_EQ(g.Size(3), 2);
  EXPECT_DOUBLE_EQ(g.MinMerge(3), 1.0);
  EXPECT_DOUBLE_EQ(g.Wmax(3), 0.45);
  EXPECT_DOUBLE_EQ(g.Wmax(2), 0.45);
  EXPECT_OK(g.Validate());
}

TEST(ClusterGraphTest, MergeRequiresAdjacencyAndFreshId) {
  ClusterGraph g = PathGraph();
  EXPECT_FALSE(g.Merge(0, 2, 3).ok());
  EXPECT_FALSE(g.Merge(0, 1, 2).ok());
}

TEST(ContractTest, IdentityAssignmentKeepsGraph) {
  ClusterGraph g = PathGraph();
  std::unordered_map<ClusterId, ClusterId> identity = {{0, 0}, {1, 1}, {2, 2}};
  ClusterGraph c = ValueOrDie(Contract(g, identity, {}));
  EXPECT_EQ(c.VertexIds(), g.VertexIds());
  ASSERT_EQ(c.NumEdges(), 2);
  EXPECT_DOUBLE_EQ(*c.CutWeight(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(*c.CutWeight(1, 2), 0.9);
  EXPECT_EQ(c.MinMerge(0), kInf);
}

TEST(ContractTest, MergesPairOfPath) {
  ClusterGraph g = PathGraph();
  ClusterGraph c =
      ValueOrDie(Contract(g, {{0, 3}, {1, 3}, {2, 2}}, {{3, 1.0}}));
  EXPECT_THAT(c.VertexIds(), ElementsAre(2, 3));
  EXPECT_EQ(c.Size(3), 2);
  EXPECT_EQ(c.Size(2), 1);
  EXPECT_DOUBLE_EQ(*c.CutWeight(2, 3), 0.9);
  EXPECT_DOUBLE_EQ(c.MinMerge(3), 1.0);
  EXPECT_EQ(c.MinMerge(2), kInf);
  EXPECT_OK(c.Validate());
}

TEST(ContractTest, WholeTriangleBecomesIsolatedVertex) {
  ClusterGraph g = MakeGraph({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  ClusterGraph c =
      ValueOrDie(Contract(g, {{0, 5}, {1, 5}, {2, 5}}, {{5, 0.5}}));
  EXPECT_EQ(c.NumVertices(), 1);
  EXPECT_EQ(c.NumEdges(), 0);
  EXPECT_EQ(c.Size(5), 3);
}

TEST(ContractTest, RejectsPartialAssignment) {
  ClusterGraph g = PathGraph();
  EXPECT_FALSE(Contract(g, {{0, 3}, {1, 3}}, {}).ok());
  EXPECT_FALSE(Contract(g, {{0, 3}, {1, 3}, {2, 2}, {9, 9}}, {}).ok());
}

TEST(PruneTest, ZeroCutoffKeepsEverything) {
  ClusterGraph g = PathGraph();
  std::vector<ClusterId> removed;
  ClusterGraph p = Prune(g, 0.0, &removed);
  EXPECT_EQ(p.NumVertices(), 3);
  EXPECT_EQ(p.NumEdges(), 2);
  EXPECT_TRUE(removed.empty());
}

TEST(PruneTest, RemovesVerticesWithSmallWmax) {
  std::vector<ClusterId> removed;
  ClusterGraph p = Prune(PathGraph(), 0.95, &removed);
  EXPECT_THAT(p.VertexIds(), ElementsAre(0, 1));
  EXPECT_THAT(removed, ElementsAre(2));
  EXPECT_EQ(p.NumEdges(), 1);
  EXPECT_OK(p.Validate());
}

TEST(PruneTest, CutoffAboveMaxRemovesAll) {
  std::vector<ClusterId> removed;
  ClusterGraph p = Prune(PathGraph(), 1.5, &removed);
  EXPECT_EQ(p.NumVertices(), 0);
  EXPECT_THAT(removed, ElementsAre(0, 1, 2));
}

TEST(RemoveIsolatedTest, DropsOnlyIsolated) {
  ClusterGraph g = MakeGraph({{0, 1, 1.0}}, {0, 1, 4, 9});
  std::vector<ClusterId> removed;
  ClusterGraph r = RemoveIsolated(g, &removed);
  EXPECT_THAT(r.VertexIds(), ElementsAre(0, 1));
  EXPECT_THAT(removed, ElementsAre(4, 9));
}

TEST(CountEdgesAtLeastTest, CountsByLinkage) {
  ClusterGraph g = PathGraph();
  EXPECT_EQ(CountEdgesAtLeast(g, 0.0), 2);
  EXPECT_EQ(CountEdgesAtLeast(g, 0.95), 1);
  EXPECT_EQ(CountEdgesAtLeast(g, 1.01), 0);
}

// Random merges on random graphs: w(x, y u z) <= max(w(x, y), w(x, z)).
TEST(ClusterGraphPropertyTest, Reducibility) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    ClusterGraph g = RandomGraph(40, 5.0, seed);
    std::mt19937_64 rng(seed);
    ClusterId next = g.MaxId() + 1;
    while (g.NumEdges() > 0) {
      std::vector<WeightedEdge> edges = g.LinkageEdges();
      const WeightedEdge e = edges[rng() % edges.size()];
      std::map<ClusterId, double> before_u, before_v;
      for (const auto& n : g.Neighbors(e.u)) {
        before_u[n.id] = ValueOrDie(g.LinkageWeight(e.u, n.id));
      }
      for (const auto& n : g.Neighbors(e.v)) {
        before_v[n.id] = ValueOrDie(g.LinkageWeight(e.v, n.id));
      }
      ASSERT_OK(g.Merge(e.u, e.v, next).status());
      for (const auto& n : g.Neighbors(next)) {
        const double after = ValueOrDie(g.LinkageWeight(next, n.id));
        double bound = 0.0;
        if (before_u.contains(n.id)) bound = std::max(bound, before_u[n.id]);
        if (before_v.contains(n.id)) bound = std::max(bound, before_v[n.id]);
        EXPECT_TRUE(AtMost(after, bound)) << after << " > " << bound;
      }
      ++next;
    }
  }
}

// wmax of a surviving cluster never increases under merges of others.
TEST(ClusterGraphPropertyTest, WmaxMonotone) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    ClusterGraph g = RandomGraph(40, 4.0, 100 + seed);
    std::mt19937_64 rng(seed);
    ClusterId next = g.MaxId() + 1;
    while (g.NumEdges() > 0) {
      std::vector<WeightedEdge> edges = g.LinkageEdges();
      const WeightedEdge e = edges[rng() % edges.size()];
      std::map<ClusterId, double> before;
      for (ClusterId v : g.VertexIds()) before[v] = g.Wmax(v);
      ASSERT_OK(g.Merge(e.u, e.v, next).status());
      for (ClusterId v : g.VertexIds()) {
        if (v == next) continue;
        EXPECT_TRUE(AtMost(g.Wmax(v), before[v]));
      }
      ++next;
    }
  }
}

// Contracting random groupings preserves the original weight between any two
// groups.
TEST(ClusterGraphPropertyTest, ContractionConservesCutWeight) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    ClusterGraph g = RandomGraph(60, 6.0, 200 + seed);
    std::mt19937_64 rng(seed);
    const int groups = 8;
    std::unordered_map<ClusterId, ClusterId> assignment;
    for (ClusterId v : g.VertexIds()) {
      assignment[v] = 1000 + static_cast<ClusterId>(rng() % groups);
    }
    std::map<std::pair<ClusterId, ClusterId>, double> expected;
    for (const WeightedEdge& e : g.LinkageEdges()) {
      ClusterId a = assignment[e.u];
      ClusterId b = assignment[e.v];
      if (a == b) continue;
      expected[{std::min(a, b), std::max(a, b)}] += e.weight;
    }
    ClusterGraph c = ValueOrDie(Contract(g, assignment, {}));
    EXPECT_OK(c.Validate());
    int64_t total_size = 0;
    for (ClusterId v : c.VertexIds()) total_size += c.Size(v);
    EXPECT_EQ(total_size, 60);
    EXPECT_EQ(c.NumEdges(), static_cast<int64_t>(expected.size()));
    for (const auto& [key, weight] : expected) {
      auto cut = c.CutWeight(key.first, key.second);
      ASSERT_TRUE(cut.has_value());
      EXPECT_NEAR(*cut, weight, 1e-9 * weight);
    }
  }
}

// After any sequence of (1+eps)-good merges, wmax(v) / M(v) <= 1 + eps.
TEST(ClusterGraphPropertyTest, GoodMergesBoundWmaxOverMinMerge) {
  for (double eps : {0.0, 0.1, 0.5}) {
    for (uint64_t seed = 1; seed <= 15; ++seed) {
      ClusterGraph g = RandomGraph(30, 4.0, 300 + seed);
      std::mt19937_64 rng(seed);
      ClusterId next = g.MaxId() + 1;
      while (true) {
        std::vector<WeightedEdge> good;
        for (const WeightedEdge& e : g.LinkageEdges()) {
          if (AtMost(OracleGoodness(g, e.u, e.v), 1.0 + eps)) good.push_back(e);
        }
        if (good.empty()) break;
        const WeightedEdge e = good[rng() % good.size()];
        ASSERT_OK(g.Merge(e.u, e.v, next++).status());
        for (ClusterId v : g.VertexIds()) {
          EXPECT_LE(g.Wmax(v) / g.MinMerge(v), (1.0 + eps) * (1.0 + 1e-12));
        }
      }
      // A mutual best pair is always good, so good merges exhaust the edges.
      EXPECT_EQ(g.NumEdges(), 0);
    }
  }
}

}  // namespace
}  // namespace terahac
