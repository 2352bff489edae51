#include "terahac/partitioner.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"

namespace terahac {
namespace {

// Dense view of the graph used while partitioning.
struct DenseGraph {
  std::vector<ClusterId> ids;
  std::unordered_map<ClusterId, int64_t> index;
  std::vector<std::vector<int64_t>> adj;
  std::vector<int64_t> best;
  std::vector<double> best_weight;
};

DenseGraph MakeDense(const ClusterGraph& graph) {
  DenseGraph dense;
  dense.ids = graph.VertexIds();
  const int64_t n = static_cast<int64_t>(dense.ids.size());
  dense.index.reserve(n);
  for (int64_t i = 0; i < n; ++i) dense.index[dense.ids[i]] = i;
  dense.adj.resize(n);
  dense.best.assign(n, -1);
  dense.best_weight.assign(n, 0.0);
  for (int64_t i = 0; i < n; ++i) {
    const ClusterGraph::Vertex& vertex = graph.GetVertex(dense.ids[i]);
    dense.adj[i].reserve(vertex.neighbors.size());
    for (const ClusterGraph::Neighbor& nb : vertex.neighbors) {
      const int64_t j = dense.index.at(nb.id);
      dense.adj[i].push_back(j);
      const double w = Linkage(nb.cut_weight, vertex.size, graph.Size(nb.id));
      // Neighbors are sorted by id, so strict > keeps the smallest id on ties.
      if (w > dense.best_weight[i]) {
        dense.best_weight[i] = w;
        dense.best[i] = j;
      }
    }
  }
  return dense;
}

int64_t Find(std::vector<int64_t>& parent, int64_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Number of edges touching `members`, given a membership flag array.
int64_t CountTouching(const DenseGraph& dense,
                      const std::vector<int64_t>& members,
                      const std::vector<char>& in_set) {
  int64_t degree_sum = 0;
  int64_t internal_twice = 0;
  for (int64_t x : members) {
    degree_sum += static_cast<int64_t>(dense.adj[x].size());
    for (int64_t y : dense.adj[x]) internal_twice += in_set[y] ? 1 : 0;
  }
  return degree_sum - internal_twice / 2;
}

// Splits one oversize component; appends the resulting pieces.
void SplitComponent(const DenseGraph& dense,
                    const std::vector<int64_t>& members, int64_t edge_count,
                    int64_t budget, std::vector<char>& in_remaining,
                    std::vector<std::vector<int64_t>>& pieces) {
  // Tree structure of the marked edges. The root is the smaller endpoint of
  // the component's unique mutual pair.
  std::unordered_map<int64_t, std::vector<int64_t>> children;
  std::unordered_map<int64_t, int64_t> parent;
  int64_t root = -1;
  for (int64_t x : members) {
    const int64_t b = dense.best[x];
    if (dense.best[b] == x && x < b) {
      parent[x] = -1;
      root = x;
    } else {
      parent[x] = b;
      children[b].push_back(x);
    }
  }

  // Subtree degree sums, computed in reverse BFS order.
  std::unordered_map<int64_t, int64_t> load;
  std::vector<int64_t> order = {root};
  for (size_t i = 0; i < order.size(); ++i) {
    auto it = children.find(order[i]);
    if (it == children.end()) continue;
    for (int64_t c : it->second) order.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int64_t total = static_cast<int64_t>(dense.adj[*it].size());
    auto ch = children.find(*it);
    if (ch != children.end()) {
      for (int64_t c : ch->second) total += load[c];
    }
    load[*it] = total;
  }

  using Key = std::tuple<int64_t, double, ClusterId, int64_t>;
  auto key_of = [&](int64_t x) {
    return Key{-load[x], dense.best_weight[x], dense.ids[x], x};
  };
  // The mutual pair stays together so the remainder always holds an edge
  // that is good for any epsilon.
  const int64_t partner = dense.best[root];
  auto detachable = [&](int64_t x) {
    return x != root && x != partner && load[x] <= budget;
  };
  std::set<Key> candidates;
  for (int64_t x : members) {
    if (detachable(x)) candidates.insert(key_of(x));
  }

  std::vector<char> detached(dense.ids.size(), 0);
  std::vector<char> in_piece(dense.ids.size(), 0);
  int64_t remaining_count = edge_count;
  while (remaining_count > budget && !candidates.empty()) {
    const int64_t c = std::get<3>(*candidates.begin());
    // Collect the subtree of c among vertices not yet detached.
    std::vector<int64_t> piece = {c};
    for (size_t i = 0; i < piece.size(); ++i) {
      auto ch = children.find(piece[i]);
      if (ch == children.end()) continue;
      for (int64_t d : ch->second) {
        if (!detached[d]) piece.push_back(d);
      }
    }
    for (int64_t x : piece) {
      if (detachable(x)) candidates.erase(key_of(x));
    }
    const int64_t piece_load = load[c];
    for (int64_t a = parent[c]; a != -1; a = parent[a]) {
      if (detachable(a)) candidates.erase(key_of(a));
      load[a] -= piece_load;
      if (detachable(a)) candidates.insert(key_of(a));
    }
    for (int64_t x : piece) {
      detached[x] = 1;
      in_piece[x] = 1;
      in_remaining[x] = 0;
    }
    // Edges no longer touching the remainder: those with both endpoints
    // outside it and at least one in the piece.
    int64_t lost_twice = 0;
    for (int64_t x : piece) {
      for (int64_t y : dense.adj[x]) {
        if (in_piece[y]) {
          lost_twice += 1;
        } else if (!in_remaining[y]) {
          lost_twice += 2;
        }
      }
    }
    remaining_count -= lost_twice / 2;
    for (int64_t x : piece) in_piece[x] = 0;
    std::sort(piece.begin(), piece.end());
    pieces.push_back(std::move(piece));
  }

  std::vector<int64_t> rest;
  for (int64_t x : members) {
    if (!detached[x]) rest.push_back(x);
  }
  std::sort(rest.begin(), rest.end());
  if (remaining_count <= budget) {
    pieces.push_back(std::move(rest));
    return;
  }
  std::vector<int64_t> chunk = {root, partner};
  int64_t chunk_load = static_cast<int64_t>(dense.adj[root].size() +
                                            dense.adj[partner].size());
  for (int64_t x : rest) {
    if (x == root || x == partner) continue;
    const int64_t degree = static_cast<int64_t>(dense.adj[x].size());
    if (!chunk.empty() && chunk_load + degree > budget) {
      std::sort(chunk.begin(), chunk.end());
      pieces.push_back(std::move(chunk));
      chunk.clear();
      chunk_load = 0;
    }
    chunk.push_back(x);
    chunk_load += degree;
  }
  if (!chunk.empty()) {
    std::sort(chunk.begin(), chunk.end());
    pieces.push_back(std::move(chunk));
  }
}

}  // namespace

int64_t PartEdgeCount(const ClusterGraph& graph,
                      const std::vector<ClusterId>& members) {
  std::unordered_map<ClusterId, bool> in_part;
  for (ClusterId v : members) in_part[v] = true;
  int64_t degree_sum = 0;
  int64_t internal_twice = 0;
  for (ClusterId v : members) {
    for (const ClusterGraph::Neighbor& nb : graph.Neighbors(v)) {
      ++degree_sum;
      if (in_part.count(nb.id)) ++internal_twice;
    }
  }
  return degree_sum - internal_twice / 2;
}

ClusterId BestNeighbor(const ClusterGraph& graph, ClusterId v) {
  const ClusterGraph::Vertex& vertex = graph.GetVertex(v);
  ClusterId best = -1;
  double best_weight = 0.0;
  for (const ClusterGraph::Neighbor& nb : vertex.neighbors) {
    const double w = Linkage(nb.cut_weight, vertex.size, graph.Size(nb.id));
    if (w > best_weight) {
      best_weight = w;
      best = nb.id;
    }
  }
  return best;
}

Partition AffinityPartition(const ClusterGraph& graph, int64_t edge_budget) {
  const DenseGraph dense = MakeDense(graph);
  const int64_t n = static_cast<int64_t>(dense.ids.size());

  std::vector<int64_t> dsu(n);
  std::iota(dsu.begin(), dsu.end(), 0);
  for (int64_t i = 0; i < n; ++i) {
    if (dense.best[i] < 0) continue;
    const int64_t a = Find(dsu, i);
    const int64_t b = Find(dsu, dense.best[i]);
    if (a != b) dsu[std::max(a, b)] = std::min(a, b);
  }
  // Components in order of their smallest member; members ascend.
  std::unordered_map<int64_t, size_t> component_index;
  std::vector<std::vector<int64_t>> components;
  for (int64_t i = 0; i < n; ++i) {
    const int64_t r = Find(dsu, i);
    auto [it, inserted] = component_index.try_emplace(r, components.size());
    if (inserted) components.emplace_back();
    components[it->second].push_back(i);
  }

  std::vector<std::vector<int64_t>> pieces;
  std::vector<bool> piece_split;
  std::vector<char> in_set(n, 0);
  for (const std::vector<int64_t>& members : components) {
    for (int64_t x : members) in_set[x] = 1;
    const int64_t count = CountTouching(dense, members, in_set);
    if (count <= edge_budget || members.size() == 1) {
      pieces.push_back(members);
      piece_split.push_back(false);
    } else {
      const size_t before = pieces.size();
      SplitComponent(dense, members, count, edge_budget, in_set, pieces);
      piece_split.resize(pieces.size(), pieces.size() - before > 1);
    }
    for (int64_t x : members) in_set[x] = 0;
  }

  std::vector<size_t> order(pieces.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return pieces[a].front() < pieces[b].front();
  });

  Partition partition;
  partition.edge_budget = edge_budget;
  partition.part_of.reserve(n);
  for (size_t p = 0; p < order.size(); ++p) {
    std::vector<ClusterId> part;
    part.reserve(pieces[order[p]].size());
    for (int64_t x : pieces[order[p]]) {
      part.push_back(dense.ids[x]);
      partition.part_of[dense.ids[x]] = static_cast<PartId>(p);
    }
    partition.parts.push_back(std::move(part));
    partition.split.push_back(piece_split[order[p]]);
  }
  return partition;
}

int64_t LocalSubgraph::NumActive() const {
  return std::count(active.begin(), active.end(), true);
}

absl::StatusOr<LocalSubgraph> ExtractLocalSubgraph(
    const ClusterGraph& graph, const Partition& partition, PartId part,
    const std::unordered_map<ClusterId, double>* wmax) {
  if (part < 0 || static_cast<size_t>(part) >= partition.parts.size()) {
    return absl::NotFoundError(absl::StrCat("unknown part ", part));
  }
  const std::vector<ClusterId>& members = partition.parts[part];
  auto in_part = [&](ClusterId id) {
    auto it = partition.part_of.find(id);
    return it != partition.part_of.end() && it->second == part;
  };

  std::unordered_map<ClusterId, ClusterGraph::Vertex> outside;
  for (ClusterId v : members) {
    for (const ClusterGraph::Neighbor& nb : graph.Neighbors(v)) {
      if (in_part(nb.id)) continue;
      auto [it, inserted] = outside.try_emplace(nb.id);
      if (inserted) {
        const ClusterGraph::Vertex& source = graph.GetVertex(nb.id);
        it->second.id = nb.id;
        it->second.size = source.size;
        it->second.min_merge = source.min_merge;
      }
      it->second.neighbors.push_back({v, nb.cut_weight});
    }
  }

  LocalSubgraph local;
  local.part = part;
  std::vector<std::pair<ClusterId, bool>> ids;
  ids.reserve(members.size() + outside.size());
  for (ClusterId v : members) ids.emplace_back(v, true);
  for (const auto& [id, vertex] : outside) ids.emplace_back(id, false);
  std::sort(ids.begin(), ids.end());
  for (const auto& [id, is_active] : ids) {
    if (is_active) {
      local.vertices.push_back(graph.GetVertex(id));
    } else {
      local.vertices.push_back(std::move(outside[id]));
    }
    local.active.push_back(is_active);
    if (wmax != nullptr) {
      auto it = wmax->find(id);
      if (it == wmax->end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("missing wmax for vertex ", id));
      }
      local.wmax_snapshot.push_back(it->second);
    } else {
      local.wmax_snapshot.push_back(graph.Wmax(id));
    }
  }
  return local;
}

void WritePartitionTsv(const Partition& partition, std::ostream& out) {
  std::vector<std::pair<ClusterId, PartId>> rows(partition.part_of.begin(),
                                                  partition.part_of.end());
  std::sort(rows.begin(), rows.end());
  out << "#vertex\tpart\n";
  for (const auto& [v, p] : rows) out << v << '\t' << p << '\n';
}

}  // namespace terahac
