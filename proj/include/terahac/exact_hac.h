#ifndef TERAHAC_EXACT_HAC_H_
#define TERAHAC_EXACT_HAC_H_

#include <vector>

#include "absl/status/statusor.h"
#include "terahac/cluster_graph.h"
#include "terahac/dendrogram.h"

namespace terahac {

inline constexpr int64_t kExactHacMaxVertices = 100'000;

// Exact average-linkage graph HAC: repeatedly merges the heaviest edge while
// its weight is at least `threshold`. Ties go to the smallest (min id,
// max id) pair. Merged clusters get ids above the graph's largest id.
absl::StatusOr<Dendrogram> ExactHac(const ClusterGraph& graph,
                                    double threshold);

struct EdgeGoodness {
  ClusterId u = 0;
  ClusterId v = 0;
  double weight = 0.0;
  double goodness = 0.0;
};

// Exact goodness of every edge (u < v, sorted) from full neighborhood scans.
std::vector<EdgeGoodness> RecomputeGoodnessTable(const ClusterGraph& graph);

}  // namespace terahac

#endif  // TERAHAC_EXACT_HAC_H_
