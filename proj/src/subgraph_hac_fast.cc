#include "terahac/subgraph_hac_fast.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "terahac/check.h"

namespace terahac {
namespace {

constexpr double kCheckSlack = 1e-9;

}  // namespace

double DefaultAlpha(double epsilon) {
  return std::pow(1.0 + epsilon, 1.0 / 6.0) - 1.0;
}

absl::StatusOr<FastSubgraphHac> FastSubgraphHac::Create(
    const LocalSubgraph& subgraph, double epsilon, double alpha) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        "the fast engine needs epsilon > 0; use the naive engine for 0");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError("alpha must be positive");
  }
  FastSubgraphHac engine;
  engine.epsilon_ = epsilon;
  engine.alpha_ = alpha;
  const size_t n = subgraph.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    engine.ids_.push_back(subgraph.vertices[i].id);
    engine.index_[subgraph.vertices[i].id] = static_cast<int32_t>(i);
    engine.size_.push_back(subgraph.vertices[i].size);
    engine.min_merge_.push_back(subgraph.vertices[i].min_merge);
  }
  engine.active_ = subgraph.active;
  engine.alive_.assign(n, true);
  engine.broadcast_size_ = engine.size_;
  engine.broadcast_wmax_.assign(n, 0.0);
  engine.nbrs_.resize(n);
  engine.partials_.resize(n);
  engine.assigned_.resize(n);
  engine.key_.assign(n, kInf);
  engine.parent_.resize(n);
  engine.min_internal_.assign(n, kInf);
  for (size_t i = 0; i < n; ++i) {
    engine.parent_[i] = static_cast<int32_t>(i);
    if (!engine.active_[i]) continue;
    for (const ClusterGraph::Neighbor& nb : subgraph.vertices[i].neighbors) {
      const int32_t j = engine.index_.at(nb.id);
      engine.SetPartial(static_cast<int32_t>(i), j, nb.cut_weight,
                        engine.size_[j]);
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (engine.active_[i]) {
      engine.broadcast_wmax_[i] = engine.ApxWmaxAt(static_cast<int32_t>(i));
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (!engine.active_[i]) continue;
    for (const auto& [j, entry] : engine.nbrs_[i]) {
      if (engine.active_[j] && static_cast<size_t>(j) > i) {
        engine.Assign(static_cast<int32_t>(i), j);
      }
    }
  }
  return engine;
}

int32_t FastSubgraphHac::Index(ClusterId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

bool FastSubgraphHac::IsActive(ClusterId id) const {
  const int32_t a = Index(id);
  return a >= 0 && active_[a] && alive_[a];
}

FastSubgraphHac::Entry& FastSubgraphHac::EdgeState(int32_t a, int32_t b) {
  return nbrs_[std::min(a, b)].at(std::max(a, b));
}

const FastSubgraphHac::Entry& FastSubgraphHac::EdgeState(int32_t a,
                                                         int32_t b) const {
  return nbrs_[std::min(a, b)].at(std::max(a, b));
}

void FastSubgraphHac::SetPartial(int32_t a, int32_t b, double cut,
                                 int64_t known_size) {
  Entry& entry = nbrs_[a][b];
  if (entry.partial > 0.0) partials_[a].erase({entry.partial, b});
  entry.cut = cut;
  entry.known_size = known_size;
  entry.partial = cut / static_cast<double>(known_size);
  partials_[a].insert({entry.partial, b});
}

double FastSubgraphHac::ApxWmaxAt(int32_t a) const {
  if (partials_[a].empty()) return 0.0;
  return partials_[a].rbegin()->first / static_cast<double>(size_[a]);
}

double FastSubgraphHac::ExactWeightAt(int32_t a, int32_t b) const {
  return Linkage(EdgeState(a, b).cut, size_[a], size_[b]);
}

double FastSubgraphHac::ExactWmaxAt(int32_t a) const {
  double best = 0.0;
  for (const auto& [b, entry] : nbrs_[a]) {
    best = std::max(best, Linkage(entry.cut, size_[a], size_[b]));
  }
  return best;
}

double FastSubgraphHac::Floor(int32_t a, int32_t b) const {
  return std::min({min_merge_[a], min_merge_[b], ExactWeightAt(a, b)});
}

double FastSubgraphHac::ApxGoodnessAt(int32_t a, int32_t b) const {
  return std::max(ApxWmaxAt(a), ApxWmaxAt(b)) / Floor(a, b);
}

double FastSubgraphHac::StoredValue(int32_t a, int32_t b) const {
  return std::max(broadcast_wmax_[a], broadcast_wmax_[b]) / Floor(a, b);
}

void FastSubgraphHac::RefreshKey(int32_t a) {
  const double key =
      assigned_[a].empty() ? kInf : assigned_[a].begin()->first;
  if (key == key_[a]) return;
  if (key_[a] < kInf) vertex_heap_.erase({key_[a], a});
  key_[a] = key;
  if (key < kInf) vertex_heap_.insert({key, a});
}

void FastSubgraphHac::Unassign(int32_t a, int32_t b) {
  Entry& state = EdgeState(a, b);
  if (state.owner < 0) return;
  const int32_t owner = state.owner;
  const int32_t other = owner == a ? b : a;
  assigned_[owner].erase({state.stored, other});
  state.owner = -1;
  RefreshKey(owner);
}

void FastSubgraphHac::Assign(int32_t a, int32_t b) {
  Entry& state = EdgeState(a, b);
  const double wa = ApxWmaxAt(a);
  const double wb = ApxWmaxAt(b);
  const int32_t owner = (wa > wb || (wa == wb && a < b)) ? a : b;
  const int32_t other = owner == a ? b : a;
  state.owner = owner;
  state.stored = StoredValue(a, b);
  assigned_[owner].insert({state.stored, other});
  RefreshKey(owner);
}

absl::StatusOr<double> FastSubgraphHac::Merge(ClusterId u, ClusterId v) {
  if (!IsActive(u) || !IsActive(v) || u == v) {
    return absl::InvalidArgumentError(
        absl::StrCat("merge of (", u, ", ", v, "): inactive endpoint"));
  }
  int32_t a = Index(u);
  int32_t b = Index(v);
  if (!nbrs_[a].contains(b)) {
    return absl::NotFoundError(absl::StrCat("no edge (", u, ", ", v, ")"));
  }
  // `a` is absorbed into `b`.
  if (size_[a] > size_[b] || (size_[a] == size_[b] && a < b)) std::swap(a, b);

  const double similarity = ExactWeightAt(a, b);
  merges_.push_back({ids_[b], ids_[a], similarity});
  min_merge_[b] = std::min({min_merge_[a], min_merge_[b], similarity});
  min_internal_[b] = std::min({min_internal_[a], min_internal_[b], similarity});
  parent_[a] = b;

  std::vector<int32_t> moved;
  for (const auto& [y, entry] : nbrs_[a]) {
    if (active_[y]) Unassign(a, y);
    if (y == b) continue;
    if (active_[y]) moved.push_back(y);
    if (active_[y] && nbrs_[b].contains(y)) Unassign(b, y);
  }

  partials_[b].erase({nbrs_[b].at(a).partial, a});
  nbrs_[b].erase(a);
  size_[b] += size_[a];

  for (const auto& [y, entry] : nbrs_[a]) {
    if (y == b) continue;
    auto it = nbrs_[b].find(y);
    const double cut =
        it == nbrs_[b].end() ? entry.cut : it->second.cut + entry.cut;
    SetPartial(b, y, cut, size_[y]);
    if (!active_[y]) continue;
    partials_[y].erase({nbrs_[y].at(a).partial, a});
    nbrs_[y].erase(a);
    SetPartial(y, b, cut, size_[b]);
  }
  nbrs_[a].clear();
  partials_[a].clear();
  alive_[a] = false;
  RefreshKey(a);

  std::vector<int32_t> changed = moved;
  changed.push_back(b);
  if (static_cast<double>(size_[b]) >=
      (1.0 + alpha_) * static_cast<double>(broadcast_size_[b])) {
    ++counters_.size_broadcasts;
    broadcast_size_[b] = size_[b];
    for (const auto& [x, entry] : nbrs_[b]) {
      if (!active_[x]) continue;
      const Entry& seen = nbrs_[x].at(b);
      if (seen.known_size != size_[b]) SetPartial(x, b, seen.cut, size_[b]);
      changed.push_back(x);
    }
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());

  std::vector<std::pair<int32_t, int32_t>> refresh;
  for (int32_t y : moved) refresh.emplace_back(std::min(b, y), std::max(b, y));
  for (int32_t x : changed) {
    const double apx = ApxWmaxAt(x);
    const double last = broadcast_wmax_[x];
    if (apx != last &&
        (apx * (1.0 + alpha_) <= last || apx >= last * (1.0 + alpha_))) {
      ++counters_.reassignments;
      broadcast_wmax_[x] = apx;
      for (const auto& [y, entry] : nbrs_[x]) {
        if (active_[y]) refresh.emplace_back(std::min(x, y), std::max(x, y));
      }
    }
  }
  std::sort(refresh.begin(), refresh.end());
  refresh.erase(std::unique(refresh.begin(), refresh.end()), refresh.end());
  for (const auto& [x, y] : refresh) {
    Unassign(x, y);
    Assign(x, y);
  }
  return similarity;
}

std::optional<std::pair<ClusterId, double>>
FastSubgraphHac::BestAssignedNeighbor(ClusterId u) {
  const int32_t a = Index(u);
  TERAHAC_CHECK(a >= 0 && active_[a] && alive_[a]);
  const double bound = (1.0 + epsilon_) / (1.0 + alpha_);
  std::vector<std::pair<double, int32_t>> candidates;
  for (const auto& item : assigned_[a]) {
    if (item.first > bound) break;
    candidates.push_back(item);
  }
  std::optional<std::pair<ClusterId, double>> found;
  for (const auto& [stored, b] : candidates) {
    const double apx = ApxGoodnessAt(a, b);
    if (apx <= 1.0 + epsilon_) {
      found = {ids_[b], apx};
      break;
    }
    ++counters_.unsuccessful_checks;
    Entry& state = EdgeState(a, b);
    assigned_[a].erase({stored, b});
    state.stored = std::max(StoredValue(a, b), std::nextafter(bound, kInf));
    assigned_[a].insert({state.stored, b});
  }
  RefreshKey(a);
  return found;
}

SubgraphHacResult FastSubgraphHac::Run() {
  const double bound = (1.0 + epsilon_) / (1.0 + alpha_);
  while (!vertex_heap_.empty()) {
    const auto [key, a] = *vertex_heap_.begin();
    if (key > bound) break;
    const auto best = BestAssignedNeighbor(ids_[a]);
    if (best.has_value()) {
      TERAHAC_CHECK(Merge(ids_[a], best->first).ok());
    }
  }
  return Result();
}

double FastSubgraphHac::ApxWmax(ClusterId v) const {
  const int32_t a = Index(v);
  TERAHAC_CHECK(a >= 0 && active_[a]);
  return ApxWmaxAt(a);
}

double FastSubgraphHac::ExactWmax(ClusterId v) const {
  const int32_t a = Index(v);
  TERAHAC_CHECK(a >= 0 && active_[a]);
  return ExactWmaxAt(a);
}

double FastSubgraphHac::ApxWeight(ClusterId u, ClusterId v) const {
  const int32_t a = Index(u);
  const int32_t b = Index(v);
  TERAHAC_CHECK(a >= 0 && b >= 0 && active_[a]);
  return nbrs_[a].at(b).partial / static_cast<double>(size_[a]);
}

double FastSubgraphHac::ExactWeight(ClusterId u, ClusterId v) const {
  return ExactWeightAt(Index(u), Index(v));
}

double FastSubgraphHac::ApxGoodness(ClusterId u, ClusterId v) const {
  return ApxGoodnessAt(Index(u), Index(v));
}

double FastSubgraphHac::ExactGoodness(ClusterId u, ClusterId v) const {
  const int32_t a = Index(u);
  const int32_t b = Index(v);
  return std::max(ExactWmaxAt(a), ExactWmaxAt(b)) / Floor(a, b);
}

std::vector<ClusterId> FastSubgraphHac::ActiveIds() const {
  std::vector<ClusterId> out;
  for (size_t a = 0; a < ids_.size(); ++a) {
    if (active_[a] && alive_[a]) out.push_back(ids_[a]);
  }
  return out;
}

std::vector<WeightedEdge> FastSubgraphHac::ActiveEdges() const {
  std::vector<WeightedEdge> edges;
  for (size_t a = 0; a < ids_.size(); ++a) {
    if (!active_[a] || !alive_[a]) continue;
    for (const auto& [b, entry] : nbrs_[a]) {
      if (active_[b] && static_cast<size_t>(b) > a) {
        edges.push_back({ids_[a], ids_[b],
                         ExactWeightAt(static_cast<int32_t>(a), b)});
      }
    }
  }
  return edges;
}

absl::Status FastSubgraphHac::CheckInvariants() const {
  const double grow = 1.0 + alpha_;
  auto fail = [](auto&&... parts) {
    return absl::InternalError(absl::StrCat(parts...));
  };
  int64_t active_edges = 0;
  int64_t assigned_total = 0;
  for (size_t i = 0; i < ids_.size(); ++i) {
    const int32_t a = static_cast<int32_t>(i);
    if (!active_[a] || !alive_[a]) continue;
    assigned_total += static_cast<int64_t>(assigned_[a].size());
    if (partials_[a].size() != static_cast<size_t>(nbrs_[a].size())) {
      return fail("vertex ", ids_[a], ": partial index out of sync");
    }
    const double wmax = ExactWmaxAt(a);
    const double apx_wmax = ApxWmaxAt(a);
    if (apx_wmax * (1.0 + kCheckSlack) < wmax ||
        apx_wmax > wmax * grow * (1.0 + kCheckSlack)) {
      return fail("vertex ", ids_[a], ": apx wmax ", apx_wmax,
                  " outside [", wmax, ", ", wmax * grow, "]");
    }
    const double expected_key =
        assigned_[a].empty() ? kInf : assigned_[a].begin()->first;
    if (key_[a] != expected_key) {
      return fail("vertex ", ids_[a], ": stale heap key");
    }
    if (key_[a] < kInf && !vertex_heap_.contains({key_[a], a})) {
      return fail("vertex ", ids_[a], ": missing from vertex heap");
    }
    for (const auto& [b, entry] : nbrs_[a]) {
      if (!partials_[a].contains({entry.partial, b})) {
        return fail("vertex ", ids_[a], ": partial index missing ", ids_[b]);
      }
      const double w = Linkage(entry.cut, size_[a], size_[b]);
      const double apx = entry.partial / static_cast<double>(size_[a]);
      if (apx * (1.0 + kCheckSlack) < w ||
          apx > w * grow * (1.0 + kCheckSlack)) {
        return fail("edge (", ids_[a], ", ", ids_[b], "): apx weight ", apx,
                    " outside [", w, ", ", w * grow, "]");
      }
      if (!active_[b]) continue;
      if (nbrs_[b].at(a).cut != entry.cut) {
        return fail("edge (", ids_[a], ", ", ids_[b], "): asymmetric cut");
      }
      if (b < a) continue;
      ++active_edges;
      const Entry& state = EdgeState(a, b);
      if (state.owner != a && state.owner != b) {
        return fail("edge (", ids_[a], ", ", ids_[b], "): unassigned");
      }
      const int32_t other = state.owner == a ? b : a;
      if (!assigned_[state.owner].contains({state.stored, other})) {
        return fail("edge (", ids_[a], ", ", ids_[b], "): not in heap");
      }
      const double g = ExactGoodness(ids_[a], ids_[b]);
      if (state.stored > g * grow * grow * (1.0 + kCheckSlack)) {
        return fail("edge (", ids_[a], ", ", ids_[b], "): stored goodness ",
                    state.stored, " above ", g * grow * grow);
      }
      const double apx_g = ApxGoodnessAt(a, b);
      if (apx_g * (1.0 + kCheckSlack) < g ||
          apx_g > g * grow * (1.0 + kCheckSlack)) {
        return fail("edge (", ids_[a], ", ", ids_[b], "): apx goodness ",
                    apx_g, " outside [", g, ", ", g * grow, "]");
      }
    }
  }
  if (assigned_total != active_edges) {
    return fail("assigned ", assigned_total, " of ", active_edges,
                " active edges");
  }
  return absl::OkStatus();
}

SubgraphHacResult FastSubgraphHac::Result() const {
  SubgraphHacResult result;
  result.merges = merges_;
  result.counters = counters_;
  for (size_t i = 0; i < ids_.size(); ++i) {
    if (!active_[i]) continue;
    int32_t r = static_cast<int32_t>(i);
    while (parent_[r] != r) r = parent_[r];
    result.assignment[ids_[i]] = ids_[r];
    if (min_internal_[r] < kInf) {
      result.min_internal_similarity[ids_[r]] = min_internal_[r];
    }
  }
  return result;
}

absl::StatusOr<SubgraphHacResult> SubgraphHacFast(
    const LocalSubgraph& subgraph, double epsilon, double alpha) {
  TERAHAC_ASSIGN_OR_RETURN(FastSubgraphHac engine,
                           FastSubgraphHac::Create(subgraph, epsilon, alpha));
  return engine.Run();
}

}  // namespace terahac
