#include "terahac/partitioner.h"

#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace terahac {
namespace {

using ::terahac::testing::MakeGraph;
using ::terahac::testing::PathGraph;
using ::terahac::testing::RandomGraph;
using ::terahac::testing::ValueOrDie;
using ::testing::ElementsAre;

ClusterGraph Star(int leaves) {
  std::vector<WeightedEdge> edges;
  for (int i = 1; i <= leaves; ++i) edges.push_back({0, i, 1.0 / i});
  return MakeGraph(edges);
}

void ExpectValidPartition(const ClusterGraph& g, const Partition& p) {
  std::set<ClusterId> seen;
  for (size_t part = 0; part < p.parts.size(); ++part) {
    ASSERT_FALSE(p.parts[part].empty());
    for (ClusterId v : p.parts[part]) {
      EXPECT_TRUE(seen.insert(v).second) << v << " in two parts";
      EXPECT_EQ(p.part_of.at(v), static_cast<PartId>(part));
    }
  }
  EXPECT_EQ(seen.size(), static_cast<size_t>(g.NumVertices()));
  EXPECT_EQ(p.part_of.size(), seen.size());
}

TEST(BestNeighborTest, HighestWeightThenSmallestId) {
  ClusterGraph g = MakeGraph({{0, 1, 0.5}, {0, 2, 0.5}, {0, 3, 0.2}}, {0, 1, 2, 3, 9});
  EXPECT_EQ(BestNeighbor(g, 0), 1);
  EXPECT_EQ(BestNeighbor(g, 3), 0);
  EXPECT_EQ(BestNeighbor(g, 9), -1);
}

TEST(AffinityPartitionTest, PathIsOnePart) {
  ClusterGraph g = PathGraph();
  Partition p = AffinityPartition(g, kDefaultEdgeBudget);
  ASSERT_EQ(p.parts.size(), 1u);
  EXPECT_THAT(p.parts[0], ElementsAre(0, 1, 2));
}

TEST(AffinityPartitionTest, DisconnectedEdgesGiveTwoParts) {
  ClusterGraph g = MakeGraph({{0, 1, 1.0}, {2, 3, 0.5}});
  Partition p = AffinityPartition(g, kDefaultEdgeBudget);
  ASSERT_EQ(p.parts.size(), 2u);
  EXPECT_THAT(p.parts[0], ElementsAre(0, 1));
  EXPECT_THAT(p.parts[1], ElementsAre(2, 3));
}

TEST(AffinityPartitionTest, IsolatedVertexIsSingletonPart) {
  ClusterGraph g = MakeGraph({{0, 1, 1.0}}, {0, 1, 5});
  Partition p = AffinityPartition(g, kDefaultEdgeBudget);
  ASSERT_EQ(p.parts.size(), 2u);
  EXPECT_THAT(p.parts[1], ElementsAre(5));
}

TEST(AffinityPartitionTest, StarIsSplitUnderBudget) {
  // Every leaf marks its only edge, so the whole star is one component with
  // 10 edges. The center alone touches all 10, so its part cannot meet a
  // budget of 5; every other part must.
  ClusterGraph g = Star(10);
  Partition p = AffinityPartition(g, 5);
  ExpectValidPartition(g, p);
  EXPECT_GE(p.parts.size(), 2u);
  for (size_t part = 0; part < p.parts.size(); ++part) {
    const auto& members = p.parts[part];
    const bool has_center =
        std::find(members.begin(), members.end(), 0) != members.end();
    if (has_center) {
      // The center stays with its best neighbor.
      EXPECT_NE(std::find(members.begin(), members.end(), 1), members.end());
    } else {
      EXPECT_LE(PartEdgeCount(g, members), 5);
    }
  }
}

TEST(AffinityPartitionTest, LongPathSplitsWithinBudget) {
  // Decreasing weights: every vertex marks its left edge, so the path is one
  // component that must be cut into pieces.
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < 100; ++i) edges.push_back({i, i + 1, 1.0 - i * 0.001});
  ClusterGraph g = MakeGraph(edges);
  Partition p = AffinityPartition(g, 10);
  ExpectValidPartition(g, p);
  EXPECT_GE(p.parts.size(), 10u);
  for (const auto& members : p.parts) {
    EXPECT_LE(PartEdgeCount(g, members), 10);
  }
  // The mutual best pair stays together.
  EXPECT_EQ(p.part_of.at(0), p.part_of.at(1));
}

TEST(AffinityPartitionPropertyTest, RandomGraphs) {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    ClusterGraph g = RandomGraph(120, 6.0, seed);
    const int64_t budget = seed % 2 == 0 ? kDefaultEdgeBudget : 40;
    Partition p = AffinityPartition(g, budget);
    ExpectValidPartition(g, p);
    EXPECT_EQ(p.split.size(), p.parts.size());
    for (size_t part = 0; part < p.parts.size(); ++part) {
      const int64_t edges = PartEdgeCount(g, p.parts[part]);
      // A part can exceed the budget only when it holds a mutual best pair
      // that alone exceeds it.
      if (edges > budget) {
        EXPECT_TRUE(p.split[part]);
        bool pair_oversize = false;
        for (ClusterId v : p.parts[part]) {
          ClusterId best = BestNeighbor(g, v);
          if (best >= 0 && PartEdgeCount(g, {v, best}) > budget) {
            pair_oversize = true;
          }
        }
        EXPECT_TRUE(pair_oversize);
      }
      if (!p.split[part]) {
        for (ClusterId v : p.parts[part]) {
          ClusterId best = BestNeighbor(g, v);
          if (best >= 0) {
            EXPECT_EQ(p.part_of.at(best), static_cast<PartId>(part));
          }
        }
      }
    }
    // Deterministic.
    Partition again = AffinityPartition(g, budget);
    EXPECT_EQ(again.parts, p.parts);
  }
}

TEST(ExtractLocalSubgraphTest, MiddleOfPath) {
  ClusterGraph g = PathGraph();
  Partition p;
  p.parts = {{0}, {1}, {2}};
  p.part_of = {{0, 0}, {1, 1}, {2, 2}};
  LocalSubgraph s = ValueOrDie(ExtractLocalSubgraph(g, p, 1));
  ASSERT_EQ(s.vertices.size(), 3u);
  EXPECT_EQ(s.NumActive(), 1);
  EXPECT_FALSE(s.active[0]);
  EXPECT_TRUE(s.active[1]);
  EXPECT_FALSE(s.active[2]);
  EXPECT_EQ(s.vertices[1].neighbors.size(), 2u);
  EXPECT_EQ(s.vertices[0].neighbors.size(), 1u);
  EXPECT_EQ(s.wmax_snapshot[2], 0.9);
}

TEST(ExtractLocalSubgraphTest, InactiveVerticesKeepOnlyEdgesIntoPart) {
  ClusterGraph g = MakeGraph({{0, 1, 1.0}, {1, 2, 0.9}, {2, 3, 0.8}});
  Partition p;
  p.parts = {{0, 1}, {2, 3}};
  p.part_of = {{0, 0}, {1, 0}, {2, 1}, {3, 1}};
  LocalSubgraph s = ValueOrDie(ExtractLocalSubgraph(g, p, 0));
  ASSERT_EQ(s.vertices.size(), 3u);
  EXPECT_EQ(s.vertices[2].id, 2);
  ASSERT_EQ(s.vertices[2].neighbors.size(), 1u);
  EXPECT_EQ(s.vertices[2].neighbors[0].id, 1);
  EXPECT_EQ(s.wmax_snapshot[2], 0.9);
}

TEST(ExtractLocalSubgraphTest, SingletonAndWholeGraph) {
  ClusterGraph g = MakeGraph({{0, 1, 1.0}}, {0, 1, 4});
  Partition p = AffinityPartition(g, kDefaultEdgeBudget);
  LocalSubgraph lone = ValueOrDie(ExtractLocalSubgraph(g, p, 1));
  ASSERT_EQ(lone.vertices.size(), 1u);
  EXPECT_TRUE(lone.active[0]);
  EXPECT_TRUE(lone.vertices[0].neighbors.empty());

  ClusterGraph path = PathGraph();
  LocalSubgraph whole = testing::WholeSubgraph(path);
  EXPECT_EQ(whole.NumActive(), 3);
  EXPECT_EQ(whole.vertices[1].neighbors.size(), 2u);
}

TEST(ExtractLocalSubgraphTest, UnknownPart) {
  ClusterGraph g = PathGraph();
  Partition p = AffinityPartition(g, kDefaultEdgeBudget);
  EXPECT_EQ(ExtractLocalSubgraph(g, p, 7).status().code(),
            absl::StatusCode::kNotFound);
}

// Intra-part edges appear in exactly one subgraph, inter-part edges in two.
TEST(ExtractLocalSubgraphPropertyTest, EdgeCoverage) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    ClusterGraph g = RandomGraph(80, 5.0, 50 + seed);
    Partition p = AffinityPartition(g, 30);
    std::map<std::pair<ClusterId, ClusterId>, int> count;
    for (size_t part = 0; part < p.parts.size(); ++part) {
      LocalSubgraph s =
          ValueOrDie(ExtractLocalSubgraph(g, p, static_cast<PartId>(part)));
      std::set<std::pair<ClusterId, ClusterId>> here;
      for (const auto& v : s.vertices) {
        for (const auto& n : v.neighbors) {
          here.emplace(std::min(v.id, n.id), std::max(v.id, n.id));
        }
      }
      for (const auto& e : here) ++count[e];
    }
    for (const WeightedEdge& e : g.LinkageEdges()) {
      const bool intra = p.part_of.at(e.u) == p.part_of.at(e.v);
      EXPECT_EQ((count[{e.u, e.v}]), intra ? 1 : 2);
    }
  }
}

TEST(WritePartitionTsvTest, Format) {
  ClusterGraph g = MakeGraph({{0, 1, 1.0}, {2, 3, 0.5}});
  std::ostringstream out;
  WritePartitionTsv(AffinityPartition(g, kDefaultEdgeBudget), out);
  EXPECT_EQ(out.str(), "#vertex\tpart\n0\t0\n1\t0\n2\t1\n3\t1\n");
}

}  // namespace
}  // namespace terahac
