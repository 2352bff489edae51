#ifndef TERAHAC_SUBGRAPH_HAC_FAST_H_
#define TERAHAC_SUBGRAPH_HAC_FAST_H_

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/container/btree_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "terahac/partitioner.h"
#include "terahac/subgraph_hac.h"
#include "terahac/types.h"

namespace terahac {

// (1+epsilon)^(1/6) - 1.
double DefaultAlpha(double epsilon);

// Lazy-heap SubgraphHAC.
//
// Each active vertex keeps its neighbors' sizes as last seen, so its view of
// an incident weight may overestimate the true weight by up to (1+alpha).
// A vertex announces its size to all neighbors once it has grown by (1+alpha)
// since the previous announcement. Every active-active edge lives in the heap
// of exactly one endpoint, keyed by a stored goodness that never exceeds the
// exact goodness by more than (1+alpha)^2. The stored value uses each
// endpoint's approximate wmax as of that endpoint's last reassignment; a
// vertex reassigns all of its edges when its approximate wmax moves by a
// (1+alpha) factor in either direction.
//
// Merges are admitted when the fresh approximate goodness is at most
// 1+epsilon, which bounds the exact goodness. On return no active-active
// edge has exact goodness at most (1+epsilon)/(1+alpha)^3.
class FastSubgraphHac {
 public:
  static absl::StatusOr<FastSubgraphHac> Create(const LocalSubgraph& subgraph,
                                                double epsilon, double alpha);

  SubgraphHacResult Run();

  // Merges two adjacent active clusters; the smaller cluster joins the
  // larger, ties keep the smaller id. No goodness check is made here.
  absl::StatusOr<double> Merge(ClusterId u, ClusterId v);

  // Scans the heap of `u` up to stored goodness (1+epsilon)/(1+alpha) and
  // returns the first neighbor with approximate goodness at most 1+epsilon,
  // together with that value.
  std::optional<std::pair<ClusterId, double>> BestAssignedNeighbor(
      ClusterId u);

  double ApxWmax(ClusterId v) const;
  double ExactWmax(ClusterId v) const;
  double ApxWeight(ClusterId u, ClusterId v) const;
  double ExactWeight(ClusterId u, ClusterId v) const;
  double ApxGoodness(ClusterId u, ClusterId v) const;
  double ExactGoodness(ClusterId u, ClusterId v) const;

  bool IsActive(ClusterId id) const;
  std::vector<ClusterId> ActiveIds() const;
  std::vector<WeightedEdge> ActiveEdges() const;

  // From-scratch check of both invariants, the two-sided approximate wmax
  // and goodness bounds, and the heap bookkeeping.
  absl::Status CheckInvariants() const;

  SubgraphHacResult Result() const;
  const SubgraphHacCounters& counters() const { return counters_; }
  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }

 private:
  struct Entry {
    double cut = 0.0;
    int64_t known_size = 1;
    double partial = 0.0;
    // Edge state, kept only in the smaller endpoint's entry: the owning
    // endpoint index (-1 if none) and the stored goodness.
    int32_t owner = -1;
    double stored = 0.0;
  };

  FastSubgraphHac() = default;

  int32_t Index(ClusterId id) const;
  Entry& EdgeState(int32_t a, int32_t b);
  const Entry& EdgeState(int32_t a, int32_t b) const;
  double ApxWmaxAt(int32_t a) const;
  double ExactWmaxAt(int32_t a) const;
  double ExactWeightAt(int32_t a, int32_t b) const;
  double Floor(int32_t a, int32_t b) const;
  double ApxGoodnessAt(int32_t a, int32_t b) const;
  double StoredValue(int32_t a, int32_t b) const;
  void SetPartial(int32_t a, int32_t b, double cut, int64_t known_size);
  void Unassign(int32_t a, int32_t b);
  void Assign(int32_t a, int32_t b);
  void RefreshKey(int32_t a);

  double epsilon_ = 0.0;
  double alpha_ = 0.0;
  std::vector<ClusterId> ids_;
  std::unordered_map<ClusterId, int32_t> index_;
  std::vector<int64_t> size_;
  std::vector<double> min_merge_;
  std::vector<bool> active_;
  std::vector<bool> alive_;
  std::vector<int64_t> broadcast_size_;
  std::vector<double> broadcast_wmax_;
  std::vector<absl::btree_map<int32_t, Entry>> nbrs_;
  std::vector<std::set<std::pair<double, int32_t>>> partials_;
  std::vector<std::set<std::pair<double, int32_t>>> assigned_;
  std::vector<double> key_;
  std::set<std::pair<double, int32_t>> vertex_heap_;
  std::vector<int32_t> parent_;
  std::vector<double> min_internal_;
  std::vector<LocalMerge> merges_;
  SubgraphHacCounters counters_;
};

absl::StatusOr<SubgraphHacResult> SubgraphHacFast(
    const LocalSubgraph& subgraph, double epsilon, double alpha);

}  // namespace terahac

#endif  // TERAHAC_SUBGRAPH_HAC_FAST_H_
