#ifndef TERAHAC_TYPES_H_
#define TERAHAC_TYPES_H_

#include <cstdint>
#include <limits>

namespace terahac {

// Ids of clusters in a ClusterGraph. Original vertices keep their input ids;
// clusters created by merges receive fresh ids above every original id, so a
// cluster id doubles as the id of its dendrogram node.
using ClusterId = int64_t;
using NodeId = ClusterId;
using PartId = int32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack applied to threshold comparisons. Absorbs roundoff from
// summing cut weights in contraction.
inline constexpr double kRelativeSlack = 1e-12;

inline bool AtMost(double value, double bound) {
  return value <= bound * (1.0 + kRelativeSlack);
}

inline bool AtLeast(double value, double bound) {
  return value >= bound * (1.0 - kRelativeSlack);
}

// Average-linkage weight of two clusters with aggregate cut weight `cut`.
inline double Linkage(double cut, int64_t size_u, int64_t size_v) {
  return cut / (static_cast<double>(size_u) * static_cast<double>(size_v));
}

struct WeightedEdge {
  ClusterId u = 0;
  ClusterId v = 0;
  double weight = 0.0;
};

// One merge event. `left` and `right` are the dendrogram nodes merged,
// `merged` is the fresh node created for their union.
struct MergeRecord {
  NodeId left = 0;
  NodeId right = 0;
  NodeId merged = 0;
  double similarity = 0.0;
  int32_t round = 0;
  int64_t sequence_index = 0;
};

}  // namespace terahac

#endif  // TERAHAC_TYPES_H_
