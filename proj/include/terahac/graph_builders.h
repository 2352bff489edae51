#ifndef TERAHAC_GRAPH_BUILDERS_H_
#define TERAHAC_GRAPH_BUILDERS_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "terahac/cluster_graph.h"
#include "terahac/types.h"

namespace terahac {

// Edge list TSV: "u\tv\tweight" per line, '#' lines are comments. Edges may
// appear in either orientation; duplicates are summed.
absl::StatusOr<ClusterGraph> ParseEdgeList(std::istream& in);
absl::StatusOr<ClusterGraph> LoadEdgeList(const std::string& path);

// Unweighted edge list: "u\tv" per line (a trailing weight column is
// ignored). Returns the deduplicated simple edge set with u < v.
absl::StatusOr<std::vector<std::pair<ClusterId, ClusterId>>>
ParseUnweightedEdgeList(std::istream& in);
absl::StatusOr<std::vector<std::pair<ClusterId, ClusterId>>>
LoadUnweightedEdgeList(const std::string& path);

// Weights each edge of a simple undirected graph by
// 1 / ln(deg(u) + deg(v)). Degree sums of 2 or less are rejected.
absl::StatusOr<ClusterGraph> DegreeWeighting(
    std::span<const std::pair<ClusterId, ClusterId>> edges);

// Row-major point matrix with optional integer labels.
struct PointSet {
  size_t dim = 0;
  std::vector<double> coords;
  std::vector<int64_t> labels;

  size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> Row(size_t i) const {
    return std::span<const double>(coords).subspan(i * dim, dim);
  }
};

// Points CSV: one row per point, comma separated reals. With
// `trailing_label` the last column is parsed as an integer label.
absl::StatusOr<PointSet> ParsePointsCsv(std::istream& in, bool trailing_label);
absl::StatusOr<PointSet> LoadPointsCsv(const std::string& path,
                                       bool trailing_label);

// Exact k-nearest-neighbor similarity graph. Each point links to its k
// nearest points by Euclidean distance (ties by index); the directed lists
// are symmetrized by union. Similarities 1 / (1 + dist) are divided by the
// maximum similarity, so the heaviest edge has weight exactly 1.
absl::StatusOr<ClusterGraph> KnnSimilarityGraph(const PointSet& points,
                                                int k);

// All-pairs similarities 1 / (1 + dist), scaled so the maximum is 1. Pairs
// are listed once with u < v in lexicographic order.
std::vector<WeightedEdge> CompleteSimilarityEdges(const PointSet& points);

struct GraphStats {
  int64_t n = 0;
  int64_t m = 0;
  double min_weight = 0.0;
  double max_weight = 0.0;
  double aspect_ratio = 0.0;
};

GraphStats ComputeGraphStats(const ClusterGraph& graph);
// Line-oriented "key=value" rendering.
std::string FormatGraphStats(const GraphStats& stats);

// Shortest decimal text that parses back to the same double; "inf" for
// infinity.
std::string FormatDouble(double value);

// Writes the linkage weights of `graph` as an edge list TSV.
void WriteEdgeList(const ClusterGraph& graph, std::ostream& out);

}  // namespace terahac

#endif  // TERAHAC_GRAPH_BUILDERS_H_
