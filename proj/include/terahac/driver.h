#ifndef TERAHAC_DRIVER_H_
#define TERAHAC_DRIVER_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "terahac/cluster_graph.h"
#include "terahac/dendrogram.h"
#include "terahac/partitioner.h"
#include "terahac/subgraph_hac.h"
#include "terahac/types.h"

namespace terahac {

enum class Engine { kNaive, kFast };

absl::StatusOr<Engine> ParseEngine(const std::string& name);

struct TeraHacOptions {
  double epsilon = 0.1;
  double threshold = 0.01;
  // Defaults to DefaultAlpha(epsilon).
  std::optional<double> alpha;
  // Defaults to fast for epsilon > 0 and naive for epsilon == 0.
  std::optional<Engine> engine;
  int64_t edge_budget = kDefaultEdgeBudget;
  int workers = 1;
  // Count good and 1-good edges at the start of every round.
  bool count_good_edges = false;
  // Emit one log line per round to this stream.
  std::ostream* log = nullptr;
};

struct RoundStats {
  int32_t round = 0;
  int64_t nodes_before = 0;
  int64_t nodes_after = 0;
  int64_t edges_before = 0;
  int64_t edges_after = 0;
  int64_t merges = 0;
  int64_t pruned = 0;
  // -1 unless counting was requested.
  int64_t good_edges = -1;
  int64_t one_good_edges = -1;
  SubgraphHacCounters counters;
  double wall_seconds = 0.0;
};

struct TeraHacResult {
  Dendrogram dendrogram;
  std::vector<RoundStats> rounds;
};

// Hands out merged-node ids in increasing order starting at `first`.
class FreshIdAllocator {
 public:
  explicit FreshIdAllocator(ClusterId first) : next_(first) {}
  absl::StatusOr<ClusterId> Next();

 private:
  ClusterId next_;
};

// Round loop: affinity partition, SubgraphHAC per part, contraction, pruning
// at threshold / (1 + epsilon) and removal of isolated vertices, until no
// edge of weight >= threshold remains.
absl::StatusOr<TeraHacResult> RunTeraHac(const ClusterGraph& graph,
                                         const TeraHacOptions& options);

// Builds the dendrogram over `leaves` from per-round merge batches applied
// in order.
absl::StatusOr<Dendrogram> MergeDendrograms(
    std::span<const NodeId> leaves,
    std::span<const std::vector<MergeRecord>> batches);

// One row per round. Timing is left out so the file depends only on the
// inputs.
void WriteRoundStatsTsv(std::span<const RoundStats> rounds, std::ostream& out);

std::string FormatRoundLog(const RoundStats& stats);

}  // namespace terahac

#endif  // TERAHAC_DRIVER_H_
