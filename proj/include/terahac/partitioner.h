#ifndef TERAHAC_PARTITIONER_H_
#define TERAHAC_PARTITIONER_H_

#include <cstdint>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "terahac/cluster_graph.h"
#include "terahac/types.h"

namespace terahac {

inline constexpr int64_t kDefaultEdgeBudget = 1'000'000;

struct Partition {
  std::unordered_map<ClusterId, PartId> part_of;
  // Members of each part in increasing id order. Parts are ordered by their
  // smallest member.
  std::vector<std::vector<ClusterId>> parts;
  int64_t edge_budget = kDefaultEdgeBudget;
  // Parts cut out of an oversize component.
  std::vector<bool> split;
};

// Number of edges with at least one endpoint in `members`.
int64_t PartEdgeCount(const ClusterGraph& graph,
                      const std::vector<ClusterId>& members);

// The best incident edge of `v`: highest linkage weight, ties to the smallest
// neighbor id. Returns -1 for isolated vertices.
ClusterId BestNeighbor(const ClusterGraph& graph, ClusterId v);

// Affinity partitioning. Every vertex marks its best incident edge and the
// components spanned by marked edges become parts. A component over
// `edge_budget` is split along its marked-edge tree: the largest subtree whose
// degree sum fits the budget is detached until the remainder fits, and a
// remainder with no detachable subtree left is chunked in id order. The
// mutual best pair at the root of each tree always stays in one part.
Partition AffinityPartition(const ClusterGraph& graph, int64_t edge_budget);

// G^C for one part: the part's vertices (active) with their full
// neighborhoods, plus their neighbors outside the part (inactive) with only
// the edges into the part.
struct LocalSubgraph {
  PartId part = 0;
  // Sorted by id.
  std::vector<ClusterGraph::Vertex> vertices;
  std::vector<bool> active;
  // Global wmax at extraction time, for every vertex.
  std::vector<double> wmax_snapshot;

  int64_t NumActive() const;
};

// `wmax`, when given, supplies precomputed global wmax values.
absl::StatusOr<LocalSubgraph> ExtractLocalSubgraph(
    const ClusterGraph& graph, const Partition& partition, PartId part,
    const std::unordered_map<ClusterId, double>* wmax = nullptr);

// "vertex\tpart" rows in vertex order.
void WritePartitionTsv(const Partition& partition, std::ostream& out);

}  // namespace terahac

#endif  // TERAHAC_PARTITIONER_H_
