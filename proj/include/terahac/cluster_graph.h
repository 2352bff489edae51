#ifndef TERAHAC_CLUSTER_GRAPH_H_
#define TERAHAC_CLUSTER_GRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "terahac/types.h"

namespace terahac {

// Weighted undirected graph whose vertices are clusters of original points.
//
// Edges store the aggregate cut weight W(u, v), the sum of original edge
// weights crossing the two clusters. The average-linkage weight is derived on
// demand as W(u, v) / (|u| * |v|), which keeps contraction a pure summation.
//
// Vertices are kept in increasing id order. Merged clusters always receive
// ids larger than every existing id, so in-place merges append and the order
// is preserved.
class ClusterGraph {
 public:
  struct Neighbor {
    ClusterId id;
    double cut_weight;
  };

  struct Vertex {
    ClusterId id = 0;
    int64_t size = 1;
    double min_merge = kInf;
    // Sorted by neighbor id.
    std::vector<Neighbor> neighbors;
  };

  // Statistics of the original graph, carried through contraction.
  struct EpochStats {
    int64_t num_vertices = 0;
    int64_t num_edges = 0;
    double min_weight = 0.0;
    double max_weight = 0.0;
  };

  ClusterGraph() = default;

  // Builds a graph of singleton clusters. Every id in `vertices` becomes a
  // vertex (isolated ones included); endpoints of `edges` are added
  // implicitly. Parallel edges in either orientation are summed.
  static absl::StatusOr<ClusterGraph> FromEdges(
      std::span<const ClusterId> vertices, std::span<const WeightedEdge> edges);

  // Builds a graph from explicit vertex records. Adjacency must be symmetric,
  // sorted and free of self-loops.
  static absl::StatusOr<ClusterGraph> FromVertices(std::vector<Vertex> vertices,
                                                   EpochStats stats);

  int64_t NumVertices() const { return num_alive_; }
  int64_t NumEdges() const { return num_edges_; }
  bool Contains(ClusterId id) const;

  // Live vertex ids in increasing order.
  std::vector<ClusterId> VertexIds() const;
  // Live vertex records in increasing id order.
  std::vector<const Vertex*> Vertices() const;

  const Vertex& GetVertex(ClusterId id) const;
  int64_t Size(ClusterId id) const { return GetVertex(id).size; }
  double MinMerge(ClusterId id) const { return GetVertex(id).min_merge; }
  std::span<const Neighbor> Neighbors(ClusterId id) const {
    return GetVertex(id).neighbors;
  }

  std::optional<double> CutWeight(ClusterId u, ClusterId v) const;
  absl::StatusOr<double> LinkageWeight(ClusterId u, ClusterId v) const;
  // Maximum linkage weight over the incident edges of `v`; 0 if isolated.
  double Wmax(ClusterId v) const;

  // Every undirected edge once, with u < v and linkage weights, ordered by
  // (u, v).
  std::vector<WeightedEdge> LinkageEdges() const;

  const EpochStats& epoch_stats() const { return epoch_stats_; }
  ClusterId MaxId() const;

  // Merges clusters `u` and `v` into a new cluster `merged`, which must be
  // larger than every id in the graph. The merge similarity is the current
  // linkage weight; min_merge(merged) = min(M(u), M(v), w(u, v)). Fails if
  // the clusters are not adjacent.
  absl::StatusOr<double> Merge(ClusterId u, ClusterId v, ClusterId merged);

  // Removes `id` together with its incident edges.
  absl::Status RemoveVertex(ClusterId id);

  // Debug check of the structural invariants.
  absl::Status Validate() const;

 private:
  Vertex& MutableVertex(ClusterId id);
  void RemoveNeighborEntry(Vertex& vertex, ClusterId neighbor);

  std::vector<Vertex> nodes_;
  std::vector<bool> alive_;
  std::unordered_map<ClusterId, size_t> index_;
  int64_t num_alive_ = 0;
  int64_t num_edges_ = 0;
  EpochStats epoch_stats_;
};

// Contracts clusters of `graph` according to `assignment`, a total map from
// each vertex to its new cluster id. Sizes and cut weights are summed,
// internal edges dropped. The min_merge of a new cluster is the minimum over
// its constituents and `merge_similarity[new id]` when present.
absl::StatusOr<ClusterGraph> Contract(
    const ClusterGraph& graph,
    const std::unordered_map<ClusterId, ClusterId>& assignment,
    const std::unordered_map<ClusterId, double>& merge_similarity);

// Removes every vertex whose wmax is below `cutoff`. Removed ids are appended
// to `removed` in increasing order when it is non-null.
ClusterGraph Prune(const ClusterGraph& graph, double cutoff,
                   std::vector<ClusterId>* removed = nullptr);

// Removes vertices without incident edges.
ClusterGraph RemoveIsolated(const ClusterGraph& graph,
                            std::vector<ClusterId>* removed = nullptr);

// Number of edges whose linkage weight is at least `threshold`.
int64_t CountEdgesAtLeast(const ClusterGraph& graph, double threshold);

}  // namespace terahac

#endif  // TERAHAC_CLUSTER_GRAPH_H_
