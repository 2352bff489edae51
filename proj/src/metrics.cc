#include "terahac/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "terahac/check.h"
#include "terahac/graph_builders.h"

namespace terahac {
namespace {

struct Contingency {
  int64_t n = 0;
  std::map<std::pair<int64_t, int64_t>, int64_t> cells;
  std::map<int64_t, int64_t> pred_sizes;
  std::map<int64_t, int64_t> truth_sizes;
};

absl::StatusOr<Contingency> BuildContingency(std::span<const int64_t> pred,
                                             std::span<const int64_t> truth) {
  if (pred.empty()) return absl::InvalidArgumentError("empty labeling");
  if (pred.size() != truth.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "label vectors differ in length: ", pred.size(), " vs ", truth.size()));
  }
  Contingency table;
  table.n = static_cast<int64_t>(pred.size());
  for (size_t i = 0; i < pred.size(); ++i) {
    ++table.cells[{pred[i], truth[i]}];
    ++table.pred_sizes[pred[i]];
    ++table.truth_sizes[truth[i]];
  }
  return table;
}

double Entropy(const std::map<int64_t, int64_t>& sizes, int64_t n) {
  double h = 0.0;
  for (const auto& [label, count] : sizes) {
    const double p = static_cast<double>(count) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

// Binary-lifting ancestor index over a dendrogram.
class LcaIndex {
 public:
  explicit LcaIndex(const Dendrogram& dendrogram) {
    const std::vector<NodeId> ids = dendrogram.NodeIds();
    index_.reserve(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) index_[ids[i]] = i;
    const size_t n = ids.size();
    depth_.assign(n, 0);
    root_.assign(n, 0);
    leaf_count_.assign(n, 0);
    std::vector<size_t> order;
    for (NodeId r : dendrogram.Roots()) order.push_back(index_.at(r));
    std::vector<size_t> parent(n);
    for (size_t i : order) {
      parent[i] = i;
      root_[i] = i;
    }
    for (size_t k = 0; k < order.size(); ++k) {
      const size_t x = order[k];
      const Dendrogram::Node& node = dendrogram.GetNode(ids[x]);
      if (node.is_leaf()) continue;
      for (NodeId c : {node.left, node.right}) {
        const size_t ci = index_.at(c);
        parent[ci] = x;
        depth_[ci] = depth_[x] + 1;
        root_[ci] = root_[x];
        order.push_back(ci);
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const Dendrogram::Node& node = dendrogram.GetNode(ids[*it]);
      if (node.is_leaf()) {
        leaf_count_[*it] = 1;
      } else {
        leaf_count_[*it] = leaf_count_[index_.at(node.left)] +
                           leaf_count_[index_.at(node.right)];
      }
    }
    int levels = 1;
    while ((size_t{1} << levels) < n + 1) ++levels;
    up_.assign(levels, parent);
    for (int k = 1; k < levels; ++k) {
      for (size_t i = 0; i < n; ++i) up_[k][i] = up_[k - 1][up_[k - 1][i]];
    }
  }

  bool Has(NodeId id) const { return index_.contains(id); }

  // Leaf count of lca(a, b), or `all` when they are in different trees.
  int64_t LcaSize(NodeId a_id, NodeId b_id, int64_t all) const {
    size_t a = index_.at(a_id);
    size_t b = index_.at(b_id);
    if (root_[a] != root_[b]) return all;
    if (depth_[a] < depth_[b]) std::swap(a, b);
    int64_t diff = depth_[a] - depth_[b];
    for (int k = 0; diff > 0; ++k, diff >>= 1) {
      if (diff & 1) a = up_[k][a];
    }
    if (a == b) return leaf_count_[a];
    for (int k = static_cast<int>(up_.size()) - 1; k >= 0; --k) {
      if (up_[k][a] != up_[k][b]) {
        a = up_[k][a];
        b = up_[k][b];
      }
    }
    return leaf_count_[up_[0][a]];
  }

 private:
  std::unordered_map<NodeId, size_t> index_;
  std::vector<int64_t> depth_;
  std::vector<size_t> root_;
  std::vector<int64_t> leaf_count_;
  std::vector<std::vector<size_t>> up_;
};

}  // namespace

absl::StatusOr<double> AdjustedRandIndex(std::span<const int64_t> pred,
                                         std::span<const int64_t> truth) {
  TERAHAC_ASSIGN_OR_RETURN(const Contingency table,
                           BuildContingency(pred, truth));
  double sum_squares = 0.0;
  for (const auto& [cell, count] : table.cells) {
    sum_squares += static_cast<double>(count) * static_cast<double>(count);
  }
  double pred_squares = 0.0;
  for (const auto& [label, count] : table.pred_sizes) {
    pred_squares += static_cast<double>(count) * static_cast<double>(count);
  }
  double truth_squares = 0.0;
  for (const auto& [label, count] : table.truth_sizes) {
    truth_squares += static_cast<double>(count) * static_cast<double>(count);
  }
  const double n = static_cast<double>(table.n);
  // Ordered pair counts.
  const double tp = sum_squares - n;
  const double fp = pred_squares - sum_squares;
  const double fn = truth_squares - sum_squares;
  const double tn = n * n - fp - fn - sum_squares;
  if (fn == 0.0 && fp == 0.0) return 1.0;
  return 2.0 * (tp * tn - fn * fp) /
         ((tp + fn) * (fn + tn) + (tp + fp) * (fp + tn));
}

absl::StatusOr<double> NormalizedMutualInformation(
    std::span<const int64_t> pred, std::span<const int64_t> truth) {
  TERAHAC_ASSIGN_OR_RETURN(const Contingency table,
                           BuildContingency(pred, truth));
  if (table.pred_sizes.size() == 1 && table.truth_sizes.size() == 1) {
    return 1.0;
  }
  const double n = static_cast<double>(table.n);
  double mi = 0.0;
  for (const auto& [cell, count] : table.cells) {
    const double a = static_cast<double>(table.pred_sizes.at(cell.first));
    const double b = static_cast<double>(table.truth_sizes.at(cell.second));
    const double c = static_cast<double>(count);
    mi += c / n * std::log(n * c / (a * b));
  }
  if (mi <= 0.0) return 0.0;
  const double mean =
      0.5 * (Entropy(table.pred_sizes, table.n) + Entropy(table.truth_sizes, table.n));
  return std::min(1.0, mi / mean);
}

absl::StatusOr<double> DendrogramPurity(
    const Dendrogram& dendrogram,
    const std::unordered_map<NodeId, int64_t>& labels) {
  // Dense class ids.
  std::map<int64_t, int32_t> class_index;
  std::unordered_map<NodeId, int32_t> leaf_class;
  for (NodeId leaf : dendrogram.leaves()) {
    auto it = labels.find(leaf);
    if (it == labels.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("no class label for leaf ", leaf));
    }
    auto [c, inserted] =
        class_index.try_emplace(it->second, static_cast<int32_t>(class_index.size()));
    leaf_class[leaf] = c->second;
  }
  const int64_t n = dendrogram.NumLeaves();
  std::vector<int64_t> class_size(class_index.size(), 0);
  for (const auto& [leaf, c] : leaf_class) ++class_size[c];
  double total_pairs = 0.0;
  for (int64_t s : class_size) {
    total_pairs += 0.5 * static_cast<double>(s) * static_cast<double>(s - 1);
  }
  if (total_pairs == 0.0) {
    return absl::InvalidArgumentError(
        "purity is undefined when every class is a singleton");
  }

  // Post-order over each tree, merging class counts small into large.
  std::vector<double> inside_pairs(class_index.size(), 0.0);
  double sum = 0.0;
  for (NodeId root : dendrogram.Roots()) {
    std::vector<NodeId> order = {root};
    for (size_t k = 0; k < order.size(); ++k) {
      const Dendrogram::Node& node = dendrogram.GetNode(order[k]);
      if (!node.is_leaf()) {
        order.push_back(node.left);
        order.push_back(node.right);
      }
    }
    std::unordered_map<NodeId, std::unordered_map<int32_t, int64_t>> counts;
    std::unordered_map<NodeId, int64_t> size;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId x = *it;
      const Dendrogram::Node& node = dendrogram.GetNode(x);
      if (node.is_leaf()) {
        counts[x][leaf_class[x]] = 1;
        size[x] = 1;
        continue;
      }
      auto big = std::move(counts[node.left]);
      auto small = std::move(counts[node.right]);
      counts.erase(node.left);
      counts.erase(node.right);
      if (big.size() < small.size()) std::swap(big, small);
      size[x] = size[node.left] + size[node.right];
      const double node_size = static_cast<double>(size[x]);
      for (const auto& [c, count] : small) {
        auto other = big.find(c);
        if (other != big.end()) {
          const double pairs =
              static_cast<double>(count) * static_cast<double>(other->second);
          inside_pairs[c] += pairs;
          sum += pairs * static_cast<double>(count + other->second) / node_size;
          other->second += count;
        } else {
          big.emplace(c, count);
        }
      }
      counts[x] = std::move(big);
    }
  }
  for (size_t c = 0; c < class_size.size(); ++c) {
    const double s = static_cast<double>(class_size[c]);
    const double across = 0.5 * s * (s - 1.0) - inside_pairs[c];
    sum += across * s / static_cast<double>(n);
  }
  return sum / total_pairs;
}

absl::StatusOr<double> DasguptaCost(const Dendrogram& dendrogram,
                                    std::span<const WeightedEdge> similarities) {
  const LcaIndex index(dendrogram);
  const int64_t n = dendrogram.NumLeaves();
  std::set<std::pair<NodeId, NodeId>> seen;
  double cost = 0.0;
  for (const WeightedEdge& e : similarities) {
    if (e.u == e.v || !index.Has(e.u) || !index.Has(e.v) ||
        !dendrogram.GetNode(e.u).is_leaf() ||
        !dendrogram.GetNode(e.v).is_leaf()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "similarity pair (", e.u, ", ", e.v, ") is not a pair of leaves"));
    }
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "duplicate similarity pair (", e.u, ", ", e.v, ")"));
    }
    cost += static_cast<double>(index.LcaSize(e.u, e.v, n)) * e.weight;
  }
  if (static_cast<int64_t>(seen.size()) != n * (n - 1) / 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "similarities cover ", seen.size(), " of ", n * (n - 1) / 2,
        " leaf pairs"));
  }
  return cost;
}

std::vector<double> GeometricThresholds(double lo, double hi, int count) {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {lo};
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) {
    out.push_back(i == count - 1 ? hi : lo * std::exp(ratio * i));
  }
  return out;
}

absl::StatusOr<std::vector<int64_t>> ClusterLabels(
    const Flattening& flattening, std::span<const NodeId> leaves) {
  std::unordered_map<NodeId, NodeId> cluster(flattening.begin(),
                                             flattening.end());
  std::vector<int64_t> out;
  out.reserve(leaves.size());
  for (NodeId leaf : leaves) {
    auto it = cluster.find(leaf);
    if (it == cluster.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("leaf ", leaf, " is not in the clustering"));
    }
    out.push_back(it->second);
  }
  return out;
}

absl::StatusOr<ThresholdSweep> BestOverThresholds(
    const Dendrogram& dendrogram,
    const std::unordered_map<NodeId, int64_t>& labels,
    std::span<const double> thresholds) {
  std::vector<NodeId> leaves = dendrogram.leaves();
  std::sort(leaves.begin(), leaves.end());
  std::vector<int64_t> truth;
  truth.reserve(leaves.size());
  for (NodeId leaf : leaves) {
    auto it = labels.find(leaf);
    if (it == labels.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("no class label for leaf ", leaf));
    }
    truth.push_back(it->second);
  }
  ThresholdSweep sweep;
  for (double t : thresholds) {
    TERAHAC_ASSIGN_OR_RETURN(const std::vector<int64_t> pred,
                             ClusterLabels(Flatten(dendrogram, t), leaves));
    TERAHAC_ASSIGN_OR_RETURN(const double ari, AdjustedRandIndex(pred, truth));
    TERAHAC_ASSIGN_OR_RETURN(const double nmi,
                             NormalizedMutualInformation(pred, truth));
    if (ari > sweep.best_ari) {
      sweep.best_ari = ari;
      sweep.ari_threshold = t;
    }
    if (nmi > sweep.best_nmi) {
      sweep.best_nmi = nmi;
      sweep.nmi_threshold = t;
    }
  }
  return sweep;
}

void WriteMetricReport(std::span<const std::pair<std::string, double>> rows,
                       std::ostream& out) {
  out << "#metric\tvalue\n";
  for (const auto& [name, value] : rows) {
    out << name << '\t' << FormatDouble(value) << '\n';
  }
}

}  // namespace terahac
