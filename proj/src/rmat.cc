#include "terahac/rmat.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "terahac/check.h"
#include "terahac/graph_builders.h"

namespace terahac {
namespace {

// Uniform double in [0, 1) from the top 53 bits.
double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

absl::StatusOr<std::vector<std::pair<ClusterId, ClusterId>>> RmatEdges(
    const RmatOptions& options, RmatReport* report) {
  if (options.scale < 1 || options.scale > kMaxRmatScale) {
    return absl::InvalidArgumentError(
        absl::StrCat("scale must be in [1, ", kMaxRmatScale, "]"));
  }
  if (options.edge_factor < 1) {
    return absl::InvalidArgumentError("edge factor must be positive");
  }
  const double sum = options.a + options.b + options.c + options.d;
  if (options.a < 0 || options.b < 0 || options.c < 0 || options.d < 0 ||
      std::abs(sum - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("quadrant probabilities must be non-negative and sum to "
                     "1, got ", sum));
  }
  const int64_t samples = options.edge_factor << options.scale;
  const double ab = options.a + options.b;
  const double abc = ab + options.c;
  std::mt19937_64 rng(options.seed);
  std::vector<std::pair<ClusterId, ClusterId>> edges;
  edges.reserve(samples);
  int64_t self_loops = 0;
  for (int64_t s = 0; s < samples; ++s) {
    ClusterId u = 0;
    ClusterId v = 0;
    for (int level = 0; level < options.scale; ++level) {
      const double r = Uniform(rng);
      u <<= 1;
      v <<= 1;
      if (r < options.a) {
      } else if (r < ab) {
        v |= 1;
      } else if (r < abc) {
        u |= 1;
      } else {
        u |= 1;
        v |= 1;
      }
    }
    if (u == v) {
      ++self_loops;
      continue;
    }
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (report != nullptr) {
    report->samples = samples;
    report->self_loops = self_loops;
    report->unique_edges = static_cast<int64_t>(edges.size());
  }
  return edges;
}

absl::StatusOr<ClusterGraph> RmatGraph(const RmatOptions& options,
                                       RmatReport* report) {
  TERAHAC_ASSIGN_OR_RETURN(auto edges, RmatEdges(options, report));
  std::unordered_map<ClusterId, int64_t> degree;
  for (const auto& [u, v] : edges) {
    ++degree[u];
    ++degree[v];
  }
  const size_t before = edges.size();
  std::erase_if(edges, [&](const std::pair<ClusterId, ClusterId>& e) {
    return degree[e.first] + degree[e.second] <= 2;
  });
  if (report != nullptr) {
    report->isolated_edges_dropped = static_cast<int64_t>(before - edges.size());
  }
  return DegreeWeighting(edges);
}

}  // namespace terahac
