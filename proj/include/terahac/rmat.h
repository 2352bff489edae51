#ifndef TERAHAC_RMAT_H_
#define TERAHAC_RMAT_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "terahac/cluster_graph.h"
#include "terahac/types.h"

namespace terahac {

inline constexpr int kMaxRmatScale = 26;

struct RmatOptions {
  int scale = 10;
  int64_t edge_factor = 50;
  double a = 0.6;
  double b = 0.15;
  double c = 0.15;
  double d = 0.1;
  uint64_t seed = 1;
};

struct RmatReport {
  int64_t samples = 0;
  int64_t self_loops = 0;
  int64_t unique_edges = 0;
  int64_t isolated_edges_dropped = 0;
};

// Samples edge_factor * 2^scale endpoint pairs by recursive quadrant
// descent, drops self-loops and returns the distinct undirected edges with
// u < v in sorted order.
absl::StatusOr<std::vector<std::pair<ClusterId, ClusterId>>> RmatEdges(
    const RmatOptions& options, RmatReport* report = nullptr);

// RmatEdges with 1 / ln(deg u + deg v) weights. Edges whose endpoints both
// have degree 1 cannot be weighted and are dropped first.
absl::StatusOr<ClusterGraph> RmatGraph(const RmatOptions& options,
                                       RmatReport* report = nullptr);

}  // namespace terahac

#endif  // TERAHAC_RMAT_H_
