#ifndef TERAHAC_METRICS_H_
#define TERAHAC_METRICS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "terahac/dendrogram.h"
#include "terahac/types.h"

namespace terahac {

// Pair-counting adjusted Rand index. Both label vectors index the same
// items.
absl::StatusOr<double> AdjustedRandIndex(std::span<const int64_t> pred,
                                         std::span<const int64_t> truth);

// Mutual information over the arithmetic mean of the two entropies.
absl::StatusOr<double> NormalizedMutualInformation(
    std::span<const int64_t> pred, std::span<const int64_t> truth);

// Average over same-class leaf pairs of the fraction of their lowest common
// ancestor's leaves that share the class. Leaves in different trees use the
// set of all leaves as their ancestor.
absl::StatusOr<double> DendrogramPurity(
    const Dendrogram& dendrogram,
    const std::unordered_map<NodeId, int64_t>& labels);

// Sum over all leaf pairs of |lca(u, v)| * sim(u, v). `similarities` must
// cover every pair of leaves exactly once.
absl::StatusOr<double> DasguptaCost(const Dendrogram& dendrogram,
                                    std::span<const WeightedEdge> similarities);

// `count` thresholds spaced geometrically over [lo, hi], ascending.
std::vector<double> GeometricThresholds(double lo, double hi, int count);

struct ThresholdSweep {
  double best_ari = -1.0;
  double ari_threshold = 0.0;
  double best_nmi = -1.0;
  double nmi_threshold = 0.0;
};

// Flattens at each threshold and keeps the best ARI and best NMI
// independently.
absl::StatusOr<ThresholdSweep> BestOverThresholds(
    const Dendrogram& dendrogram,
    const std::unordered_map<NodeId, int64_t>& labels,
    std::span<const double> thresholds);

// Cluster label per leaf of `flattening`, in the order of `leaves`.
absl::StatusOr<std::vector<int64_t>> ClusterLabels(
    const Flattening& flattening, std::span<const NodeId> leaves);

// "#metric\tvalue" report.
void WriteMetricReport(std::span<const std::pair<std::string, double>> rows,
                       std::ostream& out);

}  // namespace terahac

#endif  // TERAHAC_METRICS_H_
