#include "terahac/exact_hac.h"

#include <algorithm>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "terahac/check.h"

namespace terahac {

absl::StatusOr<Dendrogram> ExactHac(const ClusterGraph& graph,
                                    double threshold) {
  if (graph.NumVertices() > kExactHacMaxVertices) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "exact HAC is limited to ", kExactHacMaxVertices, " vertices, got ",
        graph.NumVertices()));
  }
  const std::vector<ClusterId> ids = graph.VertexIds();
  ClusterGraph work = graph;
  ClusterId next_id = ids.empty() ? 0 : work.MaxId() + 1;

  // Max weight first, then the smallest id pair. Entries stay valid while
  // both endpoints are alive.
  using Entry = std::tuple<double, ClusterId, ClusterId>;
  std::priority_queue<Entry> heap;
  for (const WeightedEdge& e : work.LinkageEdges()) {
    heap.emplace(e.weight, -e.u, -e.v);
  }
  std::vector<MergeRecord> merges;
  while (!heap.empty()) {
    const auto [w, nu, nv] = heap.top();
    heap.pop();
    const ClusterId u = -nu;
    const ClusterId v = -nv;
    if (!work.Contains(u) || !work.Contains(v)) continue;
    if (w < threshold) break;
    const ClusterId merged = next_id++;
    TERAHAC_ASSIGN_OR_RETURN(const double similarity, work.Merge(u, v, merged));
    MergeRecord record;
    record.left = u;
    record.right = v;
    record.merged = merged;
    record.similarity = similarity;
    record.sequence_index = static_cast<int64_t>(merges.size());
    merges.push_back(record);
    for (const ClusterGraph::Neighbor& nb : work.Neighbors(merged)) {
      heap.emplace(Linkage(nb.cut_weight, work.Size(merged), work.Size(nb.id)),
                   -std::min(merged, nb.id), -std::max(merged, nb.id));
    }
  }
  return Dendrogram::Build(ids, merges);
}

std::vector<EdgeGoodness> RecomputeGoodnessTable(const ClusterGraph& graph) {
  std::unordered_map<ClusterId, double> wmax;
  for (ClusterId v : graph.VertexIds()) wmax[v] = graph.Wmax(v);
  std::vector<EdgeGoodness> table;
  for (const WeightedEdge& e : graph.LinkageEdges()) {
    const double floor =
        std::min({graph.MinMerge(e.u), graph.MinMerge(e.v), e.weight});
    table.push_back(
        {e.u, e.v, e.weight, std::max(wmax[e.u], wmax[e.v]) / floor});
  }
  return table;
}

}  // namespace terahac
