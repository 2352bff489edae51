#include "terahac/subgraph_hac_naive.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "terahac/check.h"

namespace terahac {

NaiveSubgraphHac::NaiveSubgraphHac(const LocalSubgraph& subgraph,
                                   double epsilon)
    : epsilon_(epsilon) {
  const size_t n = subgraph.vertices.size();
  ids_.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    ids_.push_back(subgraph.vertices[i].id);
    index_[subgraph.vertices[i].id] = static_cast<int32_t>(i);
  }
  size_.resize(n);
  min_merge_.resize(n);
  cut_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const ClusterGraph::Vertex& vertex = subgraph.vertices[i];
    size_[i] = vertex.size;
    min_merge_[i] = vertex.min_merge;
    if (!subgraph.active[i]) continue;
    for (const ClusterGraph::Neighbor& nb : vertex.neighbors) {
      cut_[i].emplace(index_.at(nb.id), nb.cut_weight);
    }
  }
  active_ = subgraph.active;
  alive_.assign(n, true);
  version_.assign(n, 0);
  parent_.resize(n);
  for (size_t i = 0; i < n; ++i) parent_[i] = static_cast<int32_t>(i);
  min_internal_.assign(n, kInf);
  wmax_.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (active_[i]) wmax_[i] = ComputeWmax(static_cast<int32_t>(i));
  }
}

int32_t NaiveSubgraphHac::Index(ClusterId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

bool NaiveSubgraphHac::IsActive(ClusterId id) const {
  const int32_t a = Index(id);
  return a >= 0 && active_[a] && alive_[a];
}

double NaiveSubgraphHac::Weight(int32_t a, int32_t b) const {
  return Linkage(cut_[a].at(b), size_[a], size_[b]);
}

double NaiveSubgraphHac::ComputeWmax(int32_t a) const {
  double best = 0.0;
  for (const auto& [b, cut] : cut_[a]) {
    best = std::max(best, Linkage(cut, size_[a], size_[b]));
  }
  return best;
}

double NaiveSubgraphHac::Wmax(ClusterId id) const {
  const int32_t a = Index(id);
  TERAHAC_CHECK(a >= 0 && active_[a]);
  return wmax_[a];
}

double NaiveSubgraphHac::GoodnessAt(int32_t a, int32_t b) const {
  const double w = Weight(a, b);
  return std::max(wmax_[a], wmax_[b]) /
         std::min({min_merge_[a], min_merge_[b], w});
}

absl::StatusOr<double> NaiveSubgraphHac::Goodness(ClusterId u,
                                                  ClusterId v) const {
  if (!IsActive(u) || !IsActive(v)) {
    return absl::InvalidArgumentError(
        absl::StrCat("goodness of (", u, ", ", v, "): inactive endpoint"));
  }
  const int32_t a = Index(u);
  const int32_t b = Index(v);
  if (!cut_[a].contains(b)) {
    return absl::NotFoundError(absl::StrCat("no edge (", u, ", ", v, ")"));
  }
  return GoodnessAt(a, b);
}

absl::StatusOr<bool> NaiveSubgraphHac::IsOneGood(ClusterId u,
                                                 ClusterId v) const {
  TERAHAC_ASSIGN_OR_RETURN(const double g, Goodness(u, v));
  return AtMost(g, 1.0);
}

absl::StatusOr<bool> NaiveSubgraphHac::IsReciprocalBest(ClusterId u,
                                                        ClusterId v) const {
  TERAHAC_ASSIGN_OR_RETURN(const double g, Goodness(u, v));
  (void)g;
  const int32_t a = Index(u);
  const int32_t b = Index(v);
  return AtLeast(Weight(a, b), std::max(wmax_[a], wmax_[b]));
}

void NaiveSubgraphHac::Push(int32_t a, int32_t b) {
  const int32_t lo = std::min(a, b);
  const int32_t hi = std::max(a, b);
  heap_.emplace(GoodnessAt(lo, hi), -Weight(lo, hi), ids_[lo], ids_[hi], lo,
                hi, version_[lo], version_[hi]);
}

void NaiveSubgraphHac::PushAll(int32_t a) {
  for (const auto& [b, cut] : cut_[a]) {
    if (active_[b]) Push(a, b);
  }
}

absl::StatusOr<double> NaiveSubgraphHac::Merge(ClusterId u, ClusterId v) {
  if (!IsActive(u) || !IsActive(v) || u == v) {
    return absl::InvalidArgumentError(
        absl::StrCat("merge of (", u, ", ", v, "): inactive endpoint"));
  }
  const int32_t s = std::min(Index(u), Index(v));
  const int32_t t = std::max(Index(u), Index(v));
  if (!cut_[s].contains(t)) {
    return absl::NotFoundError(absl::StrCat("no edge (", u, ", ", v, ")"));
  }
  const double similarity = Weight(s, t);
  merges_.push_back({ids_[s], ids_[t], similarity});
  min_merge_[s] = std::min({min_merge_[s], min_merge_[t], similarity});
  min_internal_[s] = std::min({min_internal_[s], min_internal_[t], similarity});
  parent_[t] = s;

  // Weights before the merge decide which neighbors need a wmax rescan.
  cut_[s].erase(t);
  cut_[t].erase(s);
  std::vector<int32_t> touched;
  std::vector<double> old_top;
  for (const auto& [x, cut] : cut_[s]) {
    if (!active_[x]) continue;
    touched.push_back(x);
    double w = Linkage(cut, size_[s], size_[x]);
    auto it = cut_[t].find(x);
    if (it != cut_[t].end()) {
      w = std::max(w, Linkage(it->second, size_[t], size_[x]));
    }
    old_top.push_back(w);
  }
  for (const auto& [x, cut] : cut_[t]) {
    if (!active_[x] || cut_[s].contains(x)) continue;
    touched.push_back(x);
    old_top.push_back(Linkage(cut, size_[t], size_[x]));
  }

  for (const auto& [x, cut] : cut_[t]) {
    cut_[s][x] += cut;
    if (!active_[x]) continue;
    cut_[x].erase(t);
    cut_[x][s] += cut;
  }
  cut_[t].clear();
  size_[s] += size_[t];
  alive_[t] = false;
  ++version_[s];
  ++version_[t];
  wmax_[s] = ComputeWmax(s);

  for (size_t i = 0; i < touched.size(); ++i) {
    const int32_t x = touched[i];
    double updated;
    if (old_top[i] >= wmax_[x]) {
      updated = ComputeWmax(x);
    } else {
      updated = std::max(wmax_[x], Weight(x, s));
    }
    if (updated != wmax_[x]) {
      wmax_[x] = updated;
      ++version_[x];
      if (heap_ready_) PushAll(x);
    }
  }
  if (heap_ready_) PushAll(s);
  return similarity;
}

SubgraphHacResult NaiveSubgraphHac::Run() {
  heap_ = {};
  heap_ready_ = true;
  for (size_t a = 0; a < ids_.size(); ++a) {
    if (!active_[a] || !alive_[a]) continue;
    for (const auto& [b, cut] : cut_[a]) {
      if (active_[b] && static_cast<size_t>(b) > a) {
        Push(static_cast<int32_t>(a), b);
      }
    }
  }
  const double limit = (1.0 + epsilon_) * (1.0 + kRelativeSlack);
  while (!heap_.empty()) {
    const Entry top = heap_.top();
    heap_.pop();
    const int32_t a = std::get<4>(top);
    const int32_t b = std::get<5>(top);
    if (!alive_[a] || !alive_[b] || version_[a] != std::get<6>(top) ||
        version_[b] != std::get<7>(top)) {
      continue;
    }
    if (std::get<0>(top) > limit) break;
    TERAHAC_CHECK(Merge(ids_[a], ids_[b]).ok());
  }
  heap_ready_ = false;
  heap_ = {};
  return Result();
}

int32_t NaiveSubgraphHac::Rep(int32_t a) const {
  while (parent_[a] != a) a = parent_[a];
  return a;
}

SubgraphHacResult NaiveSubgraphHac::Result() const {
  SubgraphHacResult result;
  result.merges = merges_;
  for (size_t a = 0; a < ids_.size(); ++a) {
    if (!active_[a]) continue;
    const int32_t r = Rep(static_cast<int32_t>(a));
    result.assignment[ids_[a]] = ids_[r];
    if (min_internal_[r] < kInf) {
      result.min_internal_similarity[ids_[r]] = min_internal_[r];
    }
  }
  return result;
}

std::vector<WeightedEdge> NaiveSubgraphHac::ActiveEdges() const {
  std::vector<WeightedEdge> edges;
  for (size_t a = 0; a < ids_.size(); ++a) {
    if (!active_[a] || !alive_[a]) continue;
    for (const auto& [b, cut] : cut_[a]) {
      if (active_[b] && static_cast<size_t>(b) > a) {
        edges.push_back({ids_[a], ids_[b],
                         Linkage(cut, size_[a], size_[b])});
      }
    }
  }
  return edges;
}

absl::StatusOr<SubgraphHacResult> SubgraphHacNaive(
    const LocalSubgraph& subgraph, double epsilon) {
  if (!(epsilon >= 0.0)) {
    return absl::InvalidArgumentError("epsilon must be non-negative");
  }
  NaiveSubgraphHac engine(subgraph, epsilon);
  return engine.Run();
}

}  // namespace terahac
