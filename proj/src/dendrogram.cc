#include "terahac/dendrogram.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <tuple>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "terahac/check.h"
#include "terahac/graph_builders.h"

namespace terahac {

absl::StatusOr<Dendrogram> Dendrogram::Build(
    std::span<const NodeId> leaves, std::span<const MergeRecord> merges) {
  Dendrogram dendrogram;
  for (NodeId leaf : leaves) TERAHAC_RETURN_IF_ERROR(dendrogram.AddLeaf(leaf));
  for (const MergeRecord& merge : merges) {
    TERAHAC_RETURN_IF_ERROR(dendrogram.AddMerge(merge));
  }
  return dendrogram;
}

absl::Status Dendrogram::AddLeaf(NodeId id) {
  if (id < 0) return absl::InvalidArgumentError("negative node id");
  if (!nodes_.emplace(id, Node{}).second) {
    return absl::InvalidArgumentError(absl::StrCat("duplicate node ", id));
  }
  leaves_.push_back(id);
  return absl::OkStatus();
}

absl::Status Dendrogram::AddMerge(const MergeRecord& merge) {
  if (merge.left == merge.right) {
    return absl::InvalidArgumentError(
        absl::StrCat("node ", merge.merged, " merges ", merge.left,
                     " with itself"));
  }
  for (NodeId child : {merge.left, merge.right}) {
    auto it = nodes_.find(child);
    if (it == nodes_.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("merge ", merge.merged, ": unknown child ", child));
    }
    if (it->second.parent >= 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("merge ", merge.merged, ": child ", child,
                        " already has parent ", it->second.parent));
    }
  }
  if (!(merge.similarity > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("merge ", merge.merged, ": non-positive similarity"));
  }
  Node node;
  node.similarity = merge.similarity;
  node.left = merge.left;
  node.right = merge.right;
  if (merge.merged < 0 || !nodes_.emplace(merge.merged, node).second) {
    return absl::InvalidArgumentError(
        absl::StrCat("duplicate merged id ", merge.merged));
  }
  nodes_[merge.left].parent = merge.merged;
  nodes_[merge.right].parent = merge.merged;
  merges_.push_back(merge);
  return absl::OkStatus();
}

const Dendrogram::Node& Dendrogram::GetNode(NodeId id) const {
  auto it = nodes_.find(id);
  TERAHAC_CHECK(it != nodes_.end());
  return it->second;
}

std::vector<NodeId> Dendrogram::Roots() const {
  std::vector<NodeId> roots;
  for (const auto& [id, node] : nodes_) {
    if (node.parent < 0) roots.push_back(id);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<NodeId> Dendrogram::NodeIds() const {
  std::vector<NodeId> ids;
  ids.reserve(nodes_.size());
  for (const auto& [id, node] : nodes_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<NodeId> Dendrogram::LeavesUnder(NodeId id) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack = {id};
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    const Node& node = GetNode(x);
    if (node.is_leaf()) {
      out.push_back(x);
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
  return out;
}

absl::Status Dendrogram::Validate() const {
  for (const auto& [id, node] : nodes_) {
    if (node.is_leaf()) {
      if (node.similarity != kInf) {
        return absl::InternalError(absl::StrCat("leaf ", id, " has finite similarity"));
      }
      if (node.right >= 0) {
        return absl::InternalError(absl::StrCat("leaf ", id, " has a child"));
      }
    } else {
      if (node.right < 0) {
        return absl::InternalError(absl::StrCat("node ", id, " has one child"));
      }
      for (NodeId child : {node.left, node.right}) {
        auto it = nodes_.find(child);
        if (it == nodes_.end() || it->second.parent != id) {
          return absl::InternalError(
              absl::StrCat("node ", id, ": child ", child, " not linked back"));
        }
      }
      if (!(node.similarity > 0.0) || node.similarity == kInf) {
        return absl::InternalError(
            absl::StrCat("node ", id, ": bad similarity ", node.similarity));
      }
    }
    if (node.parent >= 0) {
      auto it = nodes_.find(node.parent);
      if (it == nodes_.end() ||
          (it->second.left != id && it->second.right != id)) {
        return absl::InternalError(
            absl::StrCat("node ", id, ": parent ", node.parent, " unknown"));
      }
    }
  }
  // Every node reaches a root within |nodes| steps.
  const size_t limit = nodes_.size();
  for (const auto& [id, node] : nodes_) {
    NodeId x = id;
    size_t steps = 0;
    while (GetNode(x).parent >= 0) {
      x = GetNode(x).parent;
      if (++steps > limit) {
        return absl::InternalError(absl::StrCat("cycle through node ", id));
      }
    }
  }
  int64_t leaf_count = 0;
  for (const auto& [id, node] : nodes_) leaf_count += node.is_leaf() ? 1 : 0;
  if (leaf_count != NumLeaves() ||
      NumNodes() != 2 * NumLeaves() - static_cast<int64_t>(Roots().size())) {
    return absl::InternalError("node count does not match a binary forest");
  }
  return absl::OkStatus();
}

Flattening Flatten(const Dendrogram& dendrogram, double threshold) {
  Flattening out;
  out.reserve(dendrogram.NumLeaves());
  std::vector<NodeId> stack = dendrogram.Roots();
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    const Dendrogram::Node& node = dendrogram.GetNode(x);
    if (node.similarity >= threshold) {
      for (NodeId leaf : dendrogram.LeavesUnder(x)) out.emplace_back(leaf, x);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<NodeId>> FlatClusters(const Flattening& flattening) {
  std::map<NodeId, std::vector<NodeId>> by_cluster;
  for (const auto& [leaf, cluster] : flattening) {
    by_cluster[cluster].push_back(leaf);
  }
  std::vector<std::vector<NodeId>> clusters;
  for (auto& [cluster, leaves] : by_cluster) {
    std::sort(leaves.begin(), leaves.end());
    clusters.push_back(std::move(leaves));
  }
  std::sort(clusters.begin(), clusters.end());
  return clusters;
}

namespace {

struct Replay {
  std::vector<MergeRecord> sequence;
  double ratio = 1.0;
};

absl::StatusOr<Replay> ReplayGreedy(const Dendrogram& dendrogram,
                                    const ClusterGraph& graph) {
  std::vector<NodeId> leaves = dendrogram.leaves();
  std::sort(leaves.begin(), leaves.end());
  if (leaves != graph.VertexIds()) {
    return absl::InvalidArgumentError(
        "dendrogram leaves differ from graph vertices");
  }
  ClusterGraph replay = graph;
  ClusterId next_id = replay.MaxId() + 1;
  // Dendrogram node -> replay vertex, for nodes formed so far.
  std::unordered_map<NodeId, ClusterId> formed;
  for (NodeId leaf : leaves) formed[leaf] = leaf;

  // Heaviest-edge heap; an entry is valid while both endpoints are alive,
  // since an edge weight only changes when an endpoint merges.
  using EdgeEntry = std::tuple<double, ClusterId, ClusterId>;
  std::priority_queue<EdgeEntry> edges;
  for (const WeightedEdge& e : replay.LinkageEdges()) {
    edges.emplace(e.weight, -e.u, -e.v);
  }
  // Available merges: weight is fixed once both children are formed.
  using MergeEntry = std::tuple<double, NodeId>;
  std::priority_queue<MergeEntry> available;
  auto offer = [&](NodeId parent) -> absl::Status {
    const Dendrogram::Node& node = dendrogram.GetNode(parent);
    auto l = formed.find(node.left);
    auto r = formed.find(node.right);
    if (l == formed.end() || r == formed.end()) return absl::OkStatus();
    auto w = replay.LinkageWeight(l->second, r->second);
    if (!w.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "node ", parent, " merges clusters with no edge between them"));
    }
    available.emplace(*w, -parent);
    return absl::OkStatus();
  };
  for (NodeId leaf : leaves) {
    const NodeId parent = dendrogram.GetNode(leaf).parent;
    if (parent >= 0 && dendrogram.GetNode(parent).left == leaf) {
      TERAHAC_RETURN_IF_ERROR(offer(parent));
    }
  }

  Replay out;
  while (!available.empty()) {
    const auto [w, neg_id] = available.top();
    available.pop();
    const NodeId merged = -neg_id;
    while (!edges.empty()) {
      const auto& [ew, nu, nv] = edges.top();
      if (replay.Contains(-nu) && replay.Contains(-nv)) break;
      edges.pop();
    }
    TERAHAC_CHECK(!edges.empty());
    out.ratio = std::max(out.ratio, std::get<0>(edges.top()) / w);

    const Dendrogram::Node& node = dendrogram.GetNode(merged);
    const ClusterId u = formed.at(node.left);
    const ClusterId v = formed.at(node.right);
    const ClusterId fresh = next_id++;
    TERAHAC_ASSIGN_OR_RETURN(const double similarity,
                             replay.Merge(u, v, fresh));
    (void)similarity;
    formed.erase(node.left);
    formed.erase(node.right);
    formed[merged] = fresh;
    for (const ClusterGraph::Neighbor& nb : replay.Neighbors(fresh)) {
      edges.emplace(Linkage(nb.cut_weight, replay.Size(fresh),
                            replay.Size(nb.id)),
                    -std::min(fresh, nb.id), -std::max(fresh, nb.id));
    }
    MergeRecord record;
    record.left = node.left;
    record.right = node.right;
    record.merged = merged;
    record.similarity = w;
    record.sequence_index = static_cast<int64_t>(out.sequence.size());
    out.sequence.push_back(record);
    if (node.parent >= 0) TERAHAC_RETURN_IF_ERROR(offer(node.parent));
  }
  if (static_cast<int64_t>(out.sequence.size()) !=
      static_cast<int64_t>(dendrogram.merges().size())) {
    return absl::InvalidArgumentError("dendrogram has unreachable merges");
  }
  return out;
}

}  // namespace

absl::StatusOr<std::vector<MergeRecord>> GreedyMergeSequence(
    const Dendrogram& dendrogram, const ClusterGraph& graph) {
  TERAHAC_ASSIGN_OR_RETURN(Replay replay, ReplayGreedy(dendrogram, graph));
  return std::move(replay.sequence);
}

absl::StatusOr<double> EmpiricalApproximationRatio(const Dendrogram& dendrogram,
                                                   const ClusterGraph& graph) {
  TERAHAC_ASSIGN_OR_RETURN(Replay replay, ReplayGreedy(dendrogram, graph));
  return replay.ratio;
}

bool FlattenMinSimilarityCheck(const Dendrogram& dendrogram, double threshold,
                               double epsilon) {
  const double floor = threshold / (1.0 + epsilon);
  std::vector<NodeId> selected;
  for (const auto& [leaf, cluster] : Flatten(dendrogram, threshold)) {
    selected.push_back(cluster);
  }
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()),
                 selected.end());
  for (NodeId top : selected) {
    std::vector<NodeId> stack = {top};
    while (!stack.empty()) {
      const Dendrogram::Node& node = dendrogram.GetNode(stack.back());
      stack.pop_back();
      if (node.is_leaf()) continue;
      if (!AtLeast(node.similarity, floor)) return false;
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return true;
}

void WriteDendrogramTsv(const Dendrogram& dendrogram, std::ostream& out) {
  out << "#node_id\tparent_id\tmerge_similarity\n";
  for (NodeId id : dendrogram.NodeIds()) {
    const Dendrogram::Node& node = dendrogram.GetNode(id);
    out << id << '\t' << node.parent << '\t' << FormatDouble(node.similarity)
        << '\n';
  }
}

absl::StatusOr<Dendrogram> ParseDendrogramTsv(std::istream& in) {
  struct Row {
    NodeId parent;
    double similarity;
  };
  std::map<NodeId, Row> rows;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view text = absl::StripAsciiWhitespace(line);
    if (text.empty() || text.front() == '#') continue;
    std::vector<absl::string_view> fields =
        absl::StrSplit(text, absl::ByAnyChar(" \t"), absl::SkipEmpty());
    NodeId id, parent;
    double similarity;
    if (fields.size() != 3 || !absl::SimpleAtoi(fields[0], &id) ||
        !absl::SimpleAtoi(fields[1], &parent) ||
        !(fields[2] == "inf" ? (similarity = kInf, true)
                             : absl::SimpleAtod(fields[2], &similarity))) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": malformed dendrogram row"));
    }
    if (!rows.emplace(id, Row{parent, similarity}).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": duplicate node ", id));
    }
  }
  std::map<NodeId, std::vector<NodeId>> children;
  for (const auto& [id, row] : rows) {
    if (row.parent < 0) continue;
    if (!rows.contains(row.parent)) {
      return absl::InvalidArgumentError(
          absl::StrCat("node ", id, ": unknown parent ", row.parent));
    }
    children[row.parent].push_back(id);
  }
  Dendrogram dendrogram;
  for (const auto& [id, row] : rows) {
    if (children.contains(id)) continue;
    if (row.similarity != kInf) {
      return absl::InvalidArgumentError(
          absl::StrCat("leaf ", id, " must have similarity inf"));
    }
    TERAHAC_RETURN_IF_ERROR(dendrogram.AddLeaf(id));
  }
  // Internal nodes by height, then id, so children precede parents.
  std::map<NodeId, int64_t> height;
  std::vector<std::pair<int64_t, NodeId>> order;
  for (const auto& [id, kids] : children) {
    if (kids.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("node ", id, " has ", kids.size(), " children"));
    }
  }
  for (const auto& [id, kids] : children) {
    std::vector<NodeId> stack = {id};
    size_t guard = 0;
    while (!stack.empty()) {
      if (++guard > 4 * rows.size() + 4) {
        return absl::InvalidArgumentError("cyclic parent structure");
      }
      const NodeId x = stack.back();
      if (height.contains(x)) {
        stack.pop_back();
        continue;
      }
      auto it = children.find(x);
      if (it == children.end()) {
        height[x] = 0;
        stack.pop_back();
        continue;
      }
      const NodeId a = it->second[0];
      const NodeId b = it->second[1];
      if (height.contains(a) && height.contains(b)) {
        height[x] = 1 + std::max(height[a], height[b]);
        stack.pop_back();
      } else {
        if (!height.contains(a)) stack.push_back(a);
        if (!height.contains(b)) stack.push_back(b);
      }
    }
    order.emplace_back(height[id], id);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [h, id] : order) {
    MergeRecord merge;
    merge.left = children[id][0];
    merge.right = children[id][1];
    merge.merged = id;
    merge.similarity = rows[id].similarity;
    merge.sequence_index = static_cast<int64_t>(dendrogram.merges().size());
    TERAHAC_RETURN_IF_ERROR(dendrogram.AddMerge(merge));
  }
  return dendrogram;
}

absl::StatusOr<Dendrogram> LoadDendrogramTsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ParseDendrogramTsv(in);
}

void WriteFlatteningTsv(const Flattening& flattening, std::ostream& out) {
  out << "#vertex_id\tcluster_id\n";
  for (const auto& [leaf, cluster] : flattening) {
    out << leaf << '\t' << cluster << '\n';
  }
}

}  // namespace terahac
