#include "terahac/cluster_graph.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"
#include "terahac/check.h"

namespace terahac {
namespace {

const ClusterGraph::Neighbor* FindNeighbor(
    const std::vector<ClusterGraph::Neighbor>& neighbors, ClusterId id) {
  auto it = std::lower_bound(
      neighbors.begin(), neighbors.end(), id,
      [](const ClusterGraph::Neighbor& n, ClusterId x) { return n.id < x; });
  if (it == neighbors.end() || it->id != id) return nullptr;
  return &*it;
}

}  // namespace

absl::StatusOr<ClusterGraph> ClusterGraph::FromEdges(
    std::span<const ClusterId> vertices, std::span<const WeightedEdge> edges) {
  struct Keyed {
    ClusterId u, v;
    size_t order;
    double weight;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) {
    const WeightedEdge& e = edges[i];
    if (e.u < 0 || e.v < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative vertex id in edge ", i));
    }
    if (e.u == e.v) {
      return absl::InvalidArgumentError(
          absl::StrCat("self-loop on vertex ", e.u));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-positive weight ", e.weight, " on edge (", e.u,
                       ", ", e.v, ")"));
    }
    keyed.push_back({std::min(e.u, e.v), std::max(e.u, e.v), i, e.weight});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.u, a.v, a.order) < std::tie(b.u, b.v, b.order);
  });

  std::vector<ClusterId> ids(vertices.begin(), vertices.end());
  for (const Keyed& k : keyed) {
    ids.push_back(k.u);
    ids.push_back(k.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (!ids.empty() && ids.front() < 0) {
    return absl::InvalidArgumentError("negative vertex id");
  }

  ClusterGraph graph;
  graph.nodes_.resize(ids.size());
  graph.alive_.assign(ids.size(), true);
  graph.index_.reserve(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    graph.nodes_[i].id = ids[i];
    graph.index_.emplace(ids[i], i);
  }

  EpochStats stats;
  stats.num_vertices = static_cast<int64_t>(ids.size());
  stats.min_weight = kInf;
  for (size_t i = 0; i < keyed.size();) {
    size_t j = i;
    double sum = 0.0;
    while (j < keyed.size() && keyed[j].u == keyed[i].u &&
           keyed[j].v == keyed[i].v) {
      sum += keyed[j].weight;
      ++j;
    }
    graph.nodes_[graph.index_[keyed[i].u]].neighbors.push_back(
        {keyed[i].v, sum});
    graph.nodes_[graph.index_[keyed[i].v]].neighbors.push_back(
        {keyed[i].u, sum});
    stats.min_weight = std::min(stats.min_weight, sum);
    stats.max_weight = std::max(stats.max_weight, sum);
    ++stats.num_edges;
    i = j;
  }
  if (stats.num_edges == 0) stats.min_weight = 0.0;
  for (Vertex& vertex : graph.nodes_) {
    std::sort(vertex.neighbors.begin(), vertex.neighbors.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  }
  graph.num_alive_ = stats.num_vertices;
  graph.num_edges_ = stats.num_edges;
  graph.epoch_stats_ = stats;
  return graph;
}

absl::StatusOr<ClusterGraph> ClusterGraph::FromVertices(
    std::vector<Vertex> vertices, EpochStats stats) {
  std::sort(vertices.begin(), vertices.end(),
            [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  ClusterGraph graph;
  graph.nodes_ = std::move(vertices);
  graph.alive_.assign(graph.nodes_.size(), true);
  graph.index_.reserve(graph.nodes_.size());
  int64_t directed = 0;
  for (size_t i = 0; i < graph.nodes_.size(); ++i) {
    if (!graph.index_.emplace(graph.nodes_[i].id, i).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate vertex id ", graph.nodes_[i].id));
    }
    directed += static_cast<int64_t>(graph.nodes_[i].neighbors.size());
  }
  graph.num_alive_ = static_cast<int64_t>(graph.nodes_.size());
  graph.num_edges_ = directed / 2;
  graph.epoch_stats_ = stats;
  TERAHAC_RETURN_IF_ERROR(graph.Validate());
  return graph;
}

bool ClusterGraph::Contains(ClusterId id) const {
  auto it = index_.find(id);
  return it != index_.end() && alive_[it->second];
}

std::vector<ClusterId> ClusterGraph::VertexIds() const {
  std::vector<ClusterId> ids;
  ids.reserve(num_alive_);
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (alive_[i]) ids.push_back(nodes_[i].id);
  }
  return ids;
}

std::vector<const ClusterGraph::Vertex*> ClusterGraph::Vertices() const {
  std::vector<const Vertex*> out;
  out.reserve(num_alive_);
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (alive_[i]) out.push_back(&nodes_[i]);
  }
  return out;
}

const ClusterGraph::Vertex& ClusterGraph::GetVertex(ClusterId id) const {
  auto it = index_.find(id);
  TERAHAC_CHECK(it != index_.end() && alive_[it->second]);
  return nodes_[it->second];
}

ClusterGraph::Vertex& ClusterGraph::MutableVertex(ClusterId id) {
  auto it = index_.find(id);
  TERAHAC_CHECK(it != index_.end() && alive_[it->second]);
  return nodes_[it->second];
}

std::optional<double> ClusterGraph::CutWeight(ClusterId u, ClusterId v) const {
  if (!Contains(u) || !Contains(v)) return std::nullopt;
  const Neighbor* n = FindNeighbor(GetVertex(u).neighbors, v);
  if (n == nullptr) return std::nullopt;
  return n->cut_weight;
}

absl::StatusOr<double> ClusterGraph::LinkageWeight(ClusterId u,
                                                   ClusterId v) const {
  std::optional<double> cut = CutWeight(u, v);
  if (!cut.has_value()) {
    return absl::NotFoundError(absl::StrCat("no edge (", u, ", ", v, ")"));
  }
  return *cut / (static_cast<double>(Size(u)) * static_cast<double>(Size(v)));
}

double ClusterGraph::Wmax(ClusterId v) const {
  const Vertex& vertex = GetVertex(v);
  double best = 0.0;
  const double size = static_cast<double>(vertex.size);
  for (const Neighbor& n : vertex.neighbors) {
    best = std::max(best, n.cut_weight /
                              (size * static_cast<double>(Size(n.id))));
  }
  return best;
}

std::vector<WeightedEdge> ClusterGraph::LinkageEdges() const {
  std::vector<WeightedEdge> edges;
  edges.reserve(num_edges_);
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (!alive_[i]) continue;
    const Vertex& vertex = nodes_[i];
    for (const Neighbor& n : vertex.neighbors) {
      if (n.id <= vertex.id) continue;
      edges.push_back({vertex.id, n.id,
                       n.cut_weight / (static_cast<double>(vertex.size) *
                                       static_cast<double>(Size(n.id)))});
    }
  }
  return edges;
}

ClusterId ClusterGraph::MaxId() const {
  for (size_t i = nodes_.size(); i > 0; --i) {
    if (alive_[i - 1]) return nodes_[i - 1].id;
  }
  return -1;
}

void ClusterGraph::RemoveNeighborEntry(Vertex& vertex, ClusterId neighbor) {
  auto it = std::lower_bound(
      vertex.neighbors.begin(), vertex.neighbors.end(), neighbor,
      [](const Neighbor& n, ClusterId x) { return n.id < x; });
  if (it != vertex.neighbors.end() && it->id == neighbor) {
    vertex.neighbors.erase(it);
  }
}

absl::StatusOr<double> ClusterGraph::Merge(ClusterId u, ClusterId v,
                                           ClusterId merged) {
  if (u == v || !Contains(u) || !Contains(v)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot merge ", u, " and ", v));
  }
  if (!nodes_.empty() && merged <= nodes_.back().id) {
    return absl::InvalidArgumentError(
        absl::StrCat("merged id ", merged, " is not fresh"));
  }
  auto similarity = LinkageWeight(u, v);
  if (!similarity.ok()) return similarity.status();

  Vertex joined;
  joined.id = merged;
  {
    const Vertex& a = GetVertex(u);
    const Vertex& b = GetVertex(v);
    joined.size = a.size + b.size;
    joined.min_merge = std::min({a.min_merge, b.min_merge, *similarity});
    size_t i = 0, j = 0;
    while (i < a.neighbors.size() || j < b.neighbors.size()) {
      if (j == b.neighbors.size() ||
          (i < a.neighbors.size() && a.neighbors[i].id < b.neighbors[j].id)) {
        if (a.neighbors[i].id != v) joined.neighbors.push_back(a.neighbors[i]);
        ++i;
      } else if (i == a.neighbors.size() ||
                 b.neighbors[j].id < a.neighbors[i].id) {
        if (b.neighbors[j].id != u) joined.neighbors.push_back(b.neighbors[j]);
        ++j;
      } else {
        joined.neighbors.push_back(
            {a.neighbors[i].id,
             a.neighbors[i].cut_weight + b.neighbors[j].cut_weight});
        ++i;
        ++j;
      }
    }
  }
  int64_t removed_edges = static_cast<int64_t>(GetVertex(u).neighbors.size() +
                                               GetVertex(v).neighbors.size()) -
                          1;
  for (const Neighbor& n : joined.neighbors) {
    Vertex& x = MutableVertex(n.id);
    RemoveNeighborEntry(x, u);
    RemoveNeighborEntry(x, v);
    x.neighbors.push_back({merged, n.cut_weight});
  }
  alive_[index_[u]] = false;
  alive_[index_[v]] = false;
  nodes_[index_[u]].neighbors.clear();
  nodes_[index_[v]].neighbors.clear();
  num_edges_ += static_cast<int64_t>(joined.neighbors.size()) - removed_edges;
  --num_alive_;
  index_[merged] = nodes_.size();
  nodes_.push_back(std::move(joined));
  alive_.push_back(true);
  return *similarity;
}

absl::Status ClusterGraph::RemoveVertex(ClusterId id) {
  if (!Contains(id)) {
    return absl::NotFoundError(absl::StrCat("unknown vertex ", id));
  }
  Vertex& vertex = MutableVertex(id);
  for (const Neighbor& n : vertex.neighbors) {
    RemoveNeighborEntry(MutableVertex(n.id), id);
  }
  num_edges_ -= static_cast<int64_t>(vertex.neighbors.size());
  vertex.neighbors.clear();
  alive_[index_[id]] = false;
  --num_alive_;
  return absl::OkStatus();
}

absl::Status ClusterGraph::Validate() const {
  int64_t directed = 0;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (!alive_[i]) continue;
    const Vertex& vertex = nodes_[i];
    if (vertex.size < 1) {
      return absl::InternalError(absl::StrCat("vertex ", vertex.id, " size < 1"));
    }
    if (vertex.size == 1 && vertex.min_merge != kInf) {
      return absl::InternalError(
          absl::StrCat("singleton ", vertex.id, " has finite min_merge"));
    }
    for (size_t j = 0; j < vertex.neighbors.size(); ++j) {
      const Neighbor& n = vertex.neighbors[j];
      if (j > 0 && vertex.neighbors[j - 1].id >= n.id) {
        return absl::InternalError(
            absl::StrCat("adjacency of ", vertex.id, " not sorted"));
      }
      if (n.id == vertex.id) {
        return absl::InternalError(absl::StrCat("self-loop at ", vertex.id));
      }
      if (!(n.cut_weight > 0.0)) {
        return absl::InternalError(absl::StrCat("non-positive cut weight on (",
                                                vertex.id, ", ", n.id, ")"));
      }
      if (!Contains(n.id)) {
        return absl::InternalError(
            absl::StrCat("dangling neighbor ", n.id, " of ", vertex.id));
      }
      const Neighbor* back = FindNeighbor(GetVertex(n.id).neighbors, vertex.id);
      if (back == nullptr || back->cut_weight != n.cut_weight) {
        return absl::InternalError(absl::StrCat("asymmetric edge (", vertex.id,
                                                ", ", n.id, ")"));
      }
    }
    directed += static_cast<int64_t>(vertex.neighbors.size());
  }
  if (directed != 2 * num_edges_) {
    return absl::InternalError("edge count out of sync");
  }
  return absl::OkStatus();
}

absl::StatusOr<ClusterGraph> Contract(
    const ClusterGraph& graph,
    const std::unordered_map<ClusterId, ClusterId>& assignment,
    const std::unordered_map<ClusterId, double>& merge_similarity) {
  for (const auto& [from, to] : assignment) {
    if (!graph.Contains(from)) {
      return absl::InvalidArgumentError(
          absl::StrCat("assignment references unknown vertex ", from));
    }
  }
  const std::vector<const ClusterGraph::Vertex*> vertices = graph.Vertices();
  auto target = [&](ClusterId id) -> ClusterId { return assignment.at(id); };

  std::unordered_map<ClusterId, size_t> new_index;
  std::vector<ClusterGraph::Vertex> out;
  for (const ClusterGraph::Vertex* vertex : vertices) {
    auto it = assignment.find(vertex->id);
    if (it == assignment.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("assignment misses vertex ", vertex->id));
    }
    auto [slot, inserted] = new_index.emplace(it->second, out.size());
    if (inserted) {
      ClusterGraph::Vertex fresh;
      fresh.id = it->second;
      fresh.size = 0;
      fresh.min_merge = kInf;
      out.push_back(std::move(fresh));
    }
    ClusterGraph::Vertex& dest = out[slot->second];
    dest.size += vertex->size;
    dest.min_merge = std::min(dest.min_merge, vertex->min_merge);
  }
  for (const auto& [id, similarity] : merge_similarity) {
    auto it = new_index.find(id);
    if (it == new_index.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("merge similarity for unknown cluster ", id));
    }
    out[it->second].min_merge = std::min(out[it->second].min_merge, similarity);
  }

  // Each undirected edge contributes once; sums are formed in (new pair,
  // old pair) order so both directions receive bit-identical weights.
  struct Piece {
    ClusterId a, b, old_u, old_v;
    double cut;
  };
  std::vector<Piece> pieces;
  pieces.reserve(graph.NumEdges());
  for (const ClusterGraph::Vertex* vertex : vertices) {
    const ClusterId a = target(vertex->id);
    for (const ClusterGraph::Neighbor& n : vertex->neighbors) {
      if (n.id <= vertex->id) continue;
      const ClusterId b = target(n.id);
      if (a == b) continue;
      pieces.push_back(
          {std::min(a, b), std::max(a, b), vertex->id, n.id, n.cut_weight});
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
    return std::tie(x.a, x.b, x.old_u, x.old_v) <
           std::tie(y.a, y.b, y.old_u, y.old_v);
  });
  for (size_t i = 0; i < pieces.size();) {
    size_t j = i;
    double sum = 0.0;
    while (j < pieces.size() && pieces[j].a == pieces[i].a &&
           pieces[j].b == pieces[i].b) {
      sum += pieces[j].cut;
      ++j;
    }
    out[new_index[pieces[i].a]].neighbors.push_back({pieces[i].b, sum});
    out[new_index[pieces[i].b]].neighbors.push_back({pieces[i].a, sum});
    i = j;
  }
  for (ClusterGraph::Vertex& vertex : out) {
    std::sort(vertex.neighbors.begin(), vertex.neighbors.end(),
              [](const ClusterGraph::Neighbor& x,
                 const ClusterGraph::Neighbor& y) { return x.id < y.id; });
  }
  return ClusterGraph::FromVertices(std::move(out), graph.epoch_stats());
}

namespace {

ClusterGraph Filter(const ClusterGraph& graph,
                    const std::vector<bool>& keep_by_position,
                    std::vector<ClusterId>* removed) {
  const std::vector<const ClusterGraph::Vertex*> vertices = graph.Vertices();
  std::unordered_map<ClusterId, bool> keep;
  keep.reserve(vertices.size());
  for (size_t i = 0; i < vertices.size(); ++i) {
    keep.emplace(vertices[i]->id, keep_by_position[i]);
  }
  std::vector<ClusterGraph::Vertex> out;
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (!keep_by_position[i]) {
      if (removed != nullptr) removed->push_back(vertices[i]->id);
      continue;
    }
    ClusterGraph::Vertex copy;
    copy.id = vertices[i]->id;
    copy.size = vertices[i]->size;
    copy.min_merge = vertices[i]->min_merge;
    for (const ClusterGraph::Neighbor& n : vertices[i]->neighbors) {
      if (keep.at(n.id)) copy.neighbors.push_back(n);
    }
    out.push_back(std::move(copy));
  }
  auto result = ClusterGraph::FromVertices(std::move(out), graph.epoch_stats());
  TERAHAC_CHECK(result.ok());
  return *std::move(result);
}

}  // namespace

ClusterGraph Prune(const ClusterGraph& graph, double cutoff,
                   std::vector<ClusterId>* removed) {
  const std::vector<ClusterId> ids = graph.VertexIds();
  std::vector<bool> keep(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    // Vertices just below the cutoff through roundoff are kept.
    keep[i] = AtLeast(graph.Wmax(ids[i]), cutoff);
  }
  return Filter(graph, keep, removed);
}

ClusterGraph RemoveIsolated(const ClusterGraph& graph,
                            std::vector<ClusterId>* removed) {
  const std::vector<const ClusterGraph::Vertex*> vertices = graph.Vertices();
  std::vector<bool> keep(vertices.size());
  for (size_t i = 0; i < vertices.size(); ++i) {
    keep[i] = !vertices[i]->neighbors.empty();
  }
  return Filter(graph, keep, removed);
}

int64_t CountEdgesAtLeast(const ClusterGraph& graph, double threshold) {
  int64_t count = 0;
  for (const WeightedEdge& e : graph.LinkageEdges()) {
    if (AtLeast(e.weight, threshold)) ++count;
  }
  return count;
}

}  // namespace terahac
