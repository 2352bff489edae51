#ifndef TERAHAC_SUBGRAPH_HAC_H_
#define TERAHAC_SUBGRAPH_HAC_H_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "terahac/types.h"

namespace terahac {

// A merge inside one local subgraph. Ids are the round's vertex ids; the
// merged cluster continues under `survivor`.
struct LocalMerge {
  ClusterId survivor = 0;
  ClusterId absorbed = 0;
  double similarity = 0.0;
};

struct SubgraphHacCounters {
  int64_t size_broadcasts = 0;
  int64_t reassignments = 0;
  int64_t unsuccessful_checks = 0;
};

struct SubgraphHacResult {
  std::vector<LocalMerge> merges;
  // Every active vertex to the survivor id of its final cluster.
  std::unordered_map<ClusterId, ClusterId> assignment;
  // Minimum merge similarity inside each cluster formed this call, keyed by
  // survivor id.
  std::unordered_map<ClusterId, double> min_internal_similarity;
  SubgraphHacCounters counters;
};

}  // namespace terahac

#endif  // TERAHAC_SUBGRAPH_HAC_H_
