#include "terahac/graph_builders.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "terahac/check.h"
#include "terahac/simd/distance.h"

namespace terahac {
namespace {

bool SkipLine(absl::string_view line) {
  line = absl::StripAsciiWhitespace(line);
  return line.empty() || line.front() == '#';
}

std::vector<absl::string_view> Fields(absl::string_view line) {
  return absl::StrSplit(absl::StripAsciiWhitespace(line),
                        absl::ByAnyChar(" \t"), absl::SkipEmpty());
}

absl::Status LineError(int64_t line_number, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line_number, ": ", what));
}

absl::StatusOr<std::ifstream> Open(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return in;
}

}  // namespace

absl::StatusOr<ClusterGraph> ParseEdgeList(std::istream& in) {
  std::vector<WeightedEdge> edges;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (SkipLine(line)) continue;
    const std::vector<absl::string_view> fields = Fields(line);
    WeightedEdge e;
    if (fields.size() != 3 || !absl::SimpleAtoi(fields[0], &e.u) ||
        !absl::SimpleAtoi(fields[1], &e.v) ||
        !absl::SimpleAtod(fields[2], &e.weight)) {
      return LineError(line_number, "malformed line, expected u\\tv\\tweight");
    }
    if (e.u < 0 || e.v < 0) return LineError(line_number, "negative vertex id");
    if (e.u == e.v) return LineError(line_number, "self-loop");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      return LineError(line_number, "non-positive weight");
    }
    edges.push_back(e);
  }
  return ClusterGraph::FromEdges({}, edges);
}

absl::StatusOr<ClusterGraph> LoadEdgeList(const std::string& path) {
  TERAHAC_ASSIGN_OR_RETURN(std::ifstream in, Open(path));
  return ParseEdgeList(in);
}

absl::StatusOr<std::vector<std::pair<ClusterId, ClusterId>>>
ParseUnweightedEdgeList(std::istream& in) {
  std::vector<std::pair<ClusterId, ClusterId>> edges;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (SkipLine(line)) continue;
    const std::vector<absl::string_view> fields = Fields(line);
    ClusterId u, v;
    if (fields.size() < 2 || fields.size() > 3 ||
        !absl::SimpleAtoi(fields[0], &u) || !absl::SimpleAtoi(fields[1], &v)) {
      return LineError(line_number, "malformed line, expected u\\tv");
    }
    if (u < 0 || v < 0) return LineError(line_number, "negative vertex id");
    if (u == v) return LineError(line_number, "self-loop");
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

absl::StatusOr<std::vector<std::pair<ClusterId, ClusterId>>>
LoadUnweightedEdgeList(const std::string& path) {
  TERAHAC_ASSIGN_OR_RETURN(std::ifstream in, Open(path));
  return ParseUnweightedEdgeList(in);
}

absl::StatusOr<ClusterGraph> DegreeWeighting(
    std::span<const std::pair<ClusterId, ClusterId>> edges) {
  std::vector<std::pair<ClusterId, ClusterId>> simple;
  simple.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u == v) {
      return absl::InvalidArgumentError(absl::StrCat("self-loop on ", u));
    }
    simple.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(simple.begin(), simple.end());
  simple.erase(std::unique(simple.begin(), simple.end()), simple.end());

  std::unordered_map<ClusterId, int64_t> degree;
  for (const auto& [u, v] : simple) {
    ++degree[u];
    ++degree[v];
  }
  std::vector<WeightedEdge> weighted;
  weighted.reserve(simple.size());
  for (const auto& [u, v] : simple) {
    const int64_t sum = degree[u] + degree[v];
    if (sum <= 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "degree sum ", sum, " of edge (", u, ", ", v,
          ") gives a non-positive log weight"));
    }
    weighted.push_back({u, v, 1.0 / std::log(static_cast<double>(sum))});
  }
  return ClusterGraph::FromEdges({}, weighted);
}

absl::StatusOr<PointSet> ParsePointsCsv(std::istream& in, bool trailing_label) {
  PointSet points;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (SkipLine(line)) continue;
    std::vector<absl::string_view> fields =
        absl::StrSplit(absl::StripAsciiWhitespace(line), ',');
    if (trailing_label) {
      if (fields.size() < 2) return LineError(line_number, "missing label");
      int64_t label;
      if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(fields.back()),
                            &label)) {
        return LineError(line_number, "malformed label");
      }
      points.labels.push_back(label);
      fields.pop_back();
    }
    if (points.dim == 0) points.dim = fields.size();
    if (fields.size() != points.dim || points.dim == 0) {
      return LineError(line_number, "inconsistent dimension");
    }
    for (absl::string_view field : fields) {
      double value;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &value) ||
          !std::isfinite(value)) {
        return LineError(line_number, "malformed coordinate");
      }
      points.coords.push_back(value);
    }
  }
  return points;
}

absl::StatusOr<PointSet> LoadPointsCsv(const std::string& path,
                                       bool trailing_label) {
  TERAHAC_ASSIGN_OR_RETURN(std::ifstream in, Open(path));
  return ParsePointsCsv(in, trailing_label);
}

absl::StatusOr<ClusterGraph> KnnSimilarityGraph(const PointSet& points,
                                                int k) {
  const size_t n = points.size();
  if (k < 1 || static_cast<size_t>(k) >= n) {
    return absl::InvalidArgumentError(
        absl::StrCat("k must be in [1, n), got k=", k, " n=", n));
  }
  const simd::Isa isa = simd::DetectIsa();
  std::vector<double> dist2(n);
  std::vector<size_t> order(n);
  std::vector<WeightedEdge> edges;
  edges.reserve(n * k);
  for (size_t i = 0; i < n; ++i) {
    simd::SquaredL2ToRows(isa, points.Row(i), points.coords, points.dim,
                          dist2);
    std::iota(order.begin(), order.end(), 0);
    auto closer = [&](size_t a, size_t b) {
      if (a == i || b == i) return b == i && a != i;
      return dist2[a] < dist2[b] || (dist2[a] == dist2[b] && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
    for (int j = 0; j < k; ++j) {
      const size_t other = order[j];
      edges.push_back({static_cast<ClusterId>(std::min(i, other)),
                       static_cast<ClusterId>(std::max(i, other)),
                       1.0 / (1.0 + std::sqrt(dist2[other]))});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const WeightedEdge& a, const WeightedEdge& b) {
                            return a.u == b.u && a.v == b.v;
                          }),
              edges.end());
  double max_similarity = 0.0;
  for (const WeightedEdge& e : edges) {
    max_similarity = std::max(max_similarity, e.weight);
  }
  for (WeightedEdge& e : edges) e.weight /= max_similarity;
  std::vector<ClusterId> vertices(n);
  std::iota(vertices.begin(), vertices.end(), 0);
  return ClusterGraph::FromEdges(vertices, edges);
}

std::vector<WeightedEdge> CompleteSimilarityEdges(const PointSet& points) {
  const size_t n = points.size();
  const simd::Isa isa = simd::DetectIsa();
  std::vector<WeightedEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  std::vector<double> dist2(n);
  double max_similarity = 0.0;
  for (size_t i = 0; i < n; ++i) {
    simd::SquaredL2ToRows(isa, points.Row(i), points.coords, points.dim,
                          dist2);
    for (size_t j = i + 1; j < n; ++j) {
      const double sim = 1.0 / (1.0 + std::sqrt(dist2[j]));
      max_similarity = std::max(max_similarity, sim);
      edges.push_back(
          {static_cast<ClusterId>(i), static_cast<ClusterId>(j), sim});
    }
  }
  for (WeightedEdge& e : edges) e.weight /= max_similarity;
  return edges;
}

GraphStats ComputeGraphStats(const ClusterGraph& graph) {
  GraphStats stats;
  stats.n = graph.NumVertices();
  stats.m = graph.NumEdges();
  const std::vector<WeightedEdge> edges = graph.LinkageEdges();
  if (!edges.empty()) {
    stats.min_weight = kInf;
    for (const WeightedEdge& e : edges) {
      stats.min_weight = std::min(stats.min_weight, e.weight);
      stats.max_weight = std::max(stats.max_weight, e.weight);
    }
    stats.aspect_ratio = stats.max_weight / stats.min_weight;
  }
  return stats;
}

std::string FormatGraphStats(const GraphStats& stats) {
  return absl::StrCat("n=", stats.n, "\nm=", stats.m,
                      "\nmin_weight=", FormatDouble(stats.min_weight),
                      "\nmax_weight=", FormatDouble(stats.max_weight),
                      "\naspect_ratio=", FormatDouble(stats.aspect_ratio),
                      "\n");
}

std::string FormatDouble(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  TERAHAC_CHECK(ec == std::errc());
  return std::string(buffer, end);
}

void WriteEdgeList(const ClusterGraph& graph, std::ostream& out) {
  out << "# u\tv\tweight\n";
  for (const WeightedEdge& e : graph.LinkageEdges()) {
    out << e.u << '\t' << e.v << '\t' << FormatDouble(e.weight) << '\n';
  }
}

}  // namespace terahac
