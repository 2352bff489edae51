#ifndef TERAHAC_DENDROGRAM_H_
#define TERAHAC_DENDROGRAM_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "terahac/cluster_graph.h"
#include "terahac/types.h"

namespace terahac {

// Binary merge forest over a set of leaves. Leaves carry similarity +inf;
// each internal node records the linkage similarity of its merge.
class Dendrogram {
 public:
  struct Node {
    NodeId parent = -1;
    double similarity = kInf;
    NodeId left = -1;
    NodeId right = -1;
    bool is_leaf() const { return left < 0; }
  };

  Dendrogram() = default;

  // Leaves first, then one internal node per merge in the given order.
  static absl::StatusOr<Dendrogram> Build(std::span<const NodeId> leaves,
                                          std::span<const MergeRecord> merges);

  absl::Status AddLeaf(NodeId id);
  absl::Status AddMerge(const MergeRecord& merge);

  bool Contains(NodeId id) const { return nodes_.contains(id); }
  const Node& GetNode(NodeId id) const;
  int64_t NumNodes() const { return static_cast<int64_t>(nodes_.size()); }
  int64_t NumLeaves() const { return static_cast<int64_t>(leaves_.size()); }
  // In insertion order.
  const std::vector<NodeId>& leaves() const { return leaves_; }
  const std::vector<MergeRecord>& merges() const { return merges_; }
  // Roots in increasing id order.
  std::vector<NodeId> Roots() const;
  // All node ids in increasing order.
  std::vector<NodeId> NodeIds() const;
  // Leaves below `id`, in left-to-right order.
  std::vector<NodeId> LeavesUnder(NodeId id) const;

  absl::Status Validate() const;

 private:
  std::unordered_map<NodeId, Node> nodes_;
  std::vector<NodeId> leaves_;
  std::vector<MergeRecord> merges_;
};

// Leaf id paired with the id of the selected node covering it, sorted by
// leaf id.
using Flattening = std::vector<std::pair<NodeId, NodeId>>;

// Selects every node with similarity >= t whose ancestors are all below t.
Flattening Flatten(const Dendrogram& dendrogram, double threshold);

// Groups a flattening into clusters of leaf ids, ordered by their smallest
// leaf.
std::vector<std::vector<NodeId>> FlatClusters(const Flattening& flattening);

// Consistent merge order that always takes the available merge of highest
// current linkage weight in a replay of `graph` (ties to the smallest merged
// node id). `similarity` of each record is its replay weight.
absl::StatusOr<std::vector<MergeRecord>> GreedyMergeSequence(
    const Dendrogram& dendrogram, const ClusterGraph& graph);

// Maximum over the greedy sequence of (heaviest edge in the replay graph) /
// (merge weight). 1 when there are no merges.
absl::StatusOr<double> EmpiricalApproximationRatio(const Dendrogram& dendrogram,
                                                   const ClusterGraph& graph);

// True iff every flattened cluster at `threshold` has all internal merge
// similarities >= threshold / (1 + epsilon).
bool FlattenMinSimilarityCheck(const Dendrogram& dendrogram, double threshold,
                               double epsilon);

// "#node_id\tparent_id\tmerge_similarity" with rows in node id order.
void WriteDendrogramTsv(const Dendrogram& dendrogram, std::ostream& out);
absl::StatusOr<Dendrogram> ParseDendrogramTsv(std::istream& in);
absl::StatusOr<Dendrogram> LoadDendrogramTsv(const std::string& path);

// "#vertex_id\tcluster_id" rows.
void WriteFlatteningTsv(const Flattening& flattening, std::ostream& out);

}  // namespace terahac

#endif  // TERAHAC_DENDROGRAM_H_
