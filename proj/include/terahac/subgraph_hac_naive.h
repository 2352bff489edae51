#ifndef TERAHAC_SUBGRAPH_HAC_NAIVE_H_
#define TERAHAC_SUBGRAPH_HAC_NAIVE_H_

#include <cstdint>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "absl/container/btree_map.h"
#include "absl/status/statusor.h"
#include "terahac/partitioner.h"
#include "terahac/subgraph_hac.h"
#include "terahac/types.h"

namespace terahac {

// Reference SubgraphHAC: a heap of active-active edges keyed by exact
// goodness, merging the minimum while it is at most 1+epsilon. Ties go to
// the heavier edge, then the smaller endpoint ids. The merged cluster keeps
// the smaller id.
class NaiveSubgraphHac {
 public:
  NaiveSubgraphHac(const LocalSubgraph& subgraph, double epsilon);

  // max(wmax(u), wmax(v)) / min(M(u), M(v), w(u, v)) for adjacent actives.
  absl::StatusOr<double> Goodness(ClusterId u, ClusterId v) const;
  absl::StatusOr<bool> IsOneGood(ClusterId u, ClusterId v) const;
  // w(u, v) = max(wmax(u), wmax(v)).
  absl::StatusOr<bool> IsReciprocalBest(ClusterId u, ClusterId v) const;

  // Merges two adjacent active clusters regardless of goodness. Returns the
  // merge similarity.
  absl::StatusOr<double> Merge(ClusterId u, ClusterId v);

  // Greedy loop. Returns the accumulated result, including merges made
  // through Merge() beforehand.
  SubgraphHacResult Run();

  bool IsActive(ClusterId id) const;
  double Wmax(ClusterId id) const;
  // Current active-active edges (u < v) with linkage weights.
  std::vector<WeightedEdge> ActiveEdges() const;
  SubgraphHacResult Result() const;

 private:
  using Entry = std::tuple<double, double, ClusterId, ClusterId, int32_t,
                           int32_t, int64_t, int64_t>;

  int32_t Index(ClusterId id) const;
  double Weight(int32_t a, int32_t b) const;
  double ComputeWmax(int32_t a) const;
  double GoodnessAt(int32_t a, int32_t b) const;
  void Push(int32_t a, int32_t b);
  void PushAll(int32_t a);
  int32_t Rep(int32_t a) const;

  double epsilon_;
  std::vector<ClusterId> ids_;
  std::unordered_map<ClusterId, int32_t> index_;
  std::vector<int64_t> size_;
  std::vector<double> min_merge_;
  std::vector<bool> active_;
  std::vector<bool> alive_;
  std::vector<double> wmax_;
  std::vector<int64_t> version_;
  std::vector<absl::btree_map<int32_t, double>> cut_;
  std::vector<int32_t> parent_;
  std::vector<double> min_internal_;
  std::vector<LocalMerge> merges_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
  bool heap_ready_ = false;
};

absl::StatusOr<SubgraphHacResult> SubgraphHacNaive(
    const LocalSubgraph& subgraph, double epsilon);

}  // namespace terahac

#endif  // TERAHAC_SUBGRAPH_HAC_NAIVE_H_
