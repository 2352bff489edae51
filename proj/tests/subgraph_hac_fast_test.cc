#include "terahac/subgraph_hac_fast.h"

#include <cmath>
#include <random>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "terahac/subgraph_hac_naive.h"
#include "test_util.h"

namespace terahac {
namespace {

using ::terahac::testing::ContractResult;
using ::terahac::testing::MakeGraph;
using ::terahac::testing::OracleGoodness;
using ::terahac::testing::PathGraph;
using ::terahac::testing::RandomGraph;
using ::terahac::testing::ReplayGoodness;
using ::terahac::testing::SubgraphOf;
using ::terahac::testing::ValueOrDie;
using ::terahac::testing::WholeSubgraph;
using ::testing::DoubleEq;

TEST(DefaultAlphaTest, SixthRoot) {
  const double a = DefaultAlpha(0.1);
  EXPECT_NEAR(std::pow(1.0 + a, 6), 1.1, 1e-12);
  EXPECT_NEAR(1.1 / std::pow(1.0 + a, 3), std::sqrt(1.1), 1e-12);
}

TEST(FastSubgraphHacTest, RejectsBadParameters) {
  LocalSubgraph s = WholeSubgraph(PathGraph());
  EXPECT_FALSE(FastSubgraphHac::Create(s, 0.0, 0.1).ok());
  EXPECT_FALSE(FastSubgraphHac::Create(s, 0.1, 0.0).ok());
  EXPECT_FALSE(SubgraphHacFast(s, -1.0, 0.1).ok());
}

TEST(FastSubgraphHacTest, FreshStateIsExact) {
  ClusterGraph g = RandomGraph(30, 4.0, 3);
  FastSubgraphHac hac = ValueOrDie(FastSubgraphHac::Create(WholeSubgraph(g), 0.1, 0.05));
  for (ClusterId v : g.VertexIds()) {
    EXPECT_EQ(hac.ApxWmax(v), hac.ExactWmax(v));
    EXPECT_EQ(hac.ExactWmax(v), g.Wmax(v));
  }
  for (const WeightedEdge& e : g.LinkageEdges()) {
    EXPECT_EQ(hac.ApxWeight(e.u, e.v), e.weight);
    EXPECT_DOUBLE_EQ(hac.ExactGoodness(e.u, e.v), OracleGoodness(g, e.u, e.v));
  }
  EXPECT_OK(hac.CheckInvariants());
}

TEST(FastSubgraphHacTest, DoublingSizeBroadcasts) {
  FastSubgraphHac hac =
      ValueOrDie(FastSubgraphHac::Create(WholeSubgraph(PathGraph()), 0.1, 0.1));
  ASSERT_OK(hac.Merge(0, 1).status());
  EXPECT_GE(hac.counters().size_broadcasts, 1);
  // c now sees the exact size of {a, b}.
  EXPECT_DOUBLE_EQ(hac.ApxWeight(2, 0), 0.45);
  EXPECT_OK(hac.CheckInvariants());
}

TEST(FastSubgraphHacTest, WmaxDropTriggersReassignment) {
  FastSubgraphHac hac =
      ValueOrDie(FastSubgraphHac::Create(WholeSubgraph(PathGraph()), 0.1, 0.1));
  const int64_t before = hac.counters().reassignments;
  ASSERT_OK(hac.Merge(0, 1).status());
  // wmax of {a, b} falls from 1.0 to 0.45.
  EXPECT_GT(hac.counters().reassignments, before);
  EXPECT_DOUBLE_EQ(hac.ApxWmax(0), 0.45);
  EXPECT_OK(hac.CheckInvariants());
}

// Star around vertex 0 with a large alpha: the center grows without
// announcing its size until it is 11 times its last announced size.
TEST(FastSubgraphHacTest, LargeAlphaDefersBroadcasts) {
  std::vector<WeightedEdge> edges;
  for (int i = 1; i <= 30; ++i) {
    edges.push_back({0, i, 1.0 - 0.01 * i});
    edges.push_back({i, 100 + i, 0.2 + 0.001 * i});
  }
  ClusterGraph g = MakeGraph(edges);
  FastSubgraphHac hac = ValueOrDie(FastSubgraphHac::Create(WholeSubgraph(g), 0.1, 10.0));
  int64_t broadcasts = hac.counters().size_broadcasts;
  for (int i = 1; i <= 30; ++i) {
    ASSERT_OK(hac.Merge(0, i).status());
    const int64_t size = i + 1;
    if (hac.counters().size_broadcasts > broadcasts) {
      EXPECT_GE(size, 11);
      broadcasts = hac.counters().size_broadcasts;
    }
    ASSERT_OK(hac.CheckInvariants());
  }
  EXPECT_GE(broadcasts, 1);
}

TEST(BestAssignedNeighborTest, SingleEdge) {
  FastSubgraphHac hac = ValueOrDie(
      FastSubgraphHac::Create(WholeSubgraph(MakeGraph({{0, 1, 1.0}})), 0.1, 0.02));
  auto best = hac.BestAssignedNeighbor(0);
  if (!best.has_value()) best = hac.BestAssignedNeighbor(1);
  ASSERT_TRUE(best.has_value());
  EXPECT_THAT(best->second, DoubleEq(1.0));
}

TEST(BestAssignedNeighborTest, NothingInScanRange) {
  // goodness(bc) = 1/0.9 > 1.1 / 1.02.
  ClusterGraph g = PathGraph();
  FastSubgraphHac hac =
      ValueOrDie(FastSubgraphHac::Create(SubgraphOf(g, {1, 2}), 0.1, 0.02));
  EXPECT_FALSE(hac.BestAssignedNeighbor(1).has_value());
  EXPECT_FALSE(hac.BestAssignedNeighbor(2).has_value());
}

TEST(BestAssignedNeighborTest, StaleEntriesAreSkippedAndRefreshed) {
  // After random merges some stored goodness values lag behind; the scan
  // must never return an edge whose fresh goodness exceeds 1+eps.
  int64_t unsuccessful = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    ClusterGraph g = RandomGraph(50, 6.0, 900 + seed);
    const double eps = 0.2;
    FastSubgraphHac hac =
        ValueOrDie(FastSubgraphHac::Create(WholeSubgraph(g), eps, 0.05));
    std::mt19937_64 rng(seed);
    for (int step = 0; step < 30; ++step) {
      std::vector<WeightedEdge> edges = hac.ActiveEdges();
      if (edges.empty()) break;
      const WeightedEdge e = edges[rng() % edges.size()];
      ASSERT_OK(hac.Merge(e.u, e.v).status());
      for (ClusterId v : hac.ActiveIds()) {
        auto best = hac.BestAssignedNeighbor(v);
        if (!best.has_value()) continue;
        EXPECT_LE(best->second, 1.0 + eps);
        EXPECT_LE(hac.ExactGoodness(v, best->first), (1.0 + eps) * (1 + 1e-12));
      }
      ASSERT_OK(hac.CheckInvariants());
    }
    unsuccessful += hac.counters().unsuccessful_checks;
  }
  EXPECT_GT(unsuccessful, 0);
}

TEST(FastSubgraphHacTest, PathAgreesWithNaive) {
  LocalSubgraph s = WholeSubgraph(PathGraph());
  SubgraphHacResult fast = ValueOrDie(SubgraphHacFast(s, 0.1, 0.02));
  SubgraphHacResult naive = ValueOrDie(SubgraphHacNaive(s, 0.1));
  ASSERT_EQ(fast.merges.size(), 2u);
  ASSERT_EQ(naive.merges.size(), 2u);
  EXPECT_EQ(fast.assignment, naive.assignment);
  EXPECT_DOUBLE_EQ(fast.min_internal_similarity.at(0), 0.45);
}

TEST(FastSubgraphHacPropertyTest, SoundAndResidualBound) {
  for (double eps : {0.1, 0.5, 1.0}) {
    for (uint64_t seed = 1; seed <= 15; ++seed) {
      ClusterGraph g = RandomGraph(60, 5.0, 40 + seed);
      std::vector<ClusterId> active;
      for (ClusterId v : g.VertexIds()) {
        if (seed % 2 == 0 || v % 5 != 0) active.push_back(v);
      }
      const double alpha = DefaultAlpha(eps);
      SubgraphHacResult r =
          ValueOrDie(SubgraphHacFast(SubgraphOf(g, active), eps, alpha));
      for (double goodness : ReplayGoodness(g, r.merges)) {
        EXPECT_LE(goodness, (1.0 + eps) * (1.0 + 1e-12));
      }
      const double floor = (1.0 + eps) / std::pow(1.0 + alpha, 3);
      ClusterGraph after = ContractResult(g, r);
      for (const WeightedEdge& e : after.LinkageEdges()) {
        if (!r.assignment.contains(e.u) || !r.assignment.contains(e.v)) continue;
        EXPECT_GT(OracleGoodness(after, e.u, e.v), floor);
      }
    }
  }
}

TEST(FastSubgraphHacPropertyTest, InvariantsUnderRandomMerges) {
  int64_t steps = 0;
  for (double alpha : {0.01, 0.1, 1.0}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      ClusterGraph g = RandomGraph(40, 5.0, 60 + seed, 0.001, 1.0);
      FastSubgraphHac hac =
          ValueOrDie(FastSubgraphHac::Create(WholeSubgraph(g), 0.1, alpha));
      std::mt19937_64 rng(seed);
      while (true) {
        std::vector<WeightedEdge> edges = hac.ActiveEdges();
        if (edges.empty()) break;
        const WeightedEdge e = edges[rng() % edges.size()];
        ASSERT_OK(hac.Merge(e.u, e.v).status());
        ASSERT_OK(hac.CheckInvariants());
        ++steps;
      }
    }
  }
  EXPECT_GT(steps, 500);
}

}  // namespace
}  // namespace terahac
