#include "terahac/driver.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <thread>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "terahac/check.h"
#include "terahac/exact_hac.h"
#include "terahac/graph_builders.h"
#include "terahac/subgraph_hac_fast.h"
#include "terahac/subgraph_hac_naive.h"

namespace terahac {
namespace {

constexpr double kAspectRatioWarning = 1e12;

struct PartOutput {
  absl::Status status;
  SubgraphHacResult result;
};

// Runs `fn(p)` for every part index on a fixed pool of workers.
template <typename Fn>
void ForEachPart(size_t num_parts, int workers, Fn fn) {
  const size_t pool =
      std::min<size_t>(workers, std::max<size_t>(num_parts, 1));
  std::atomic<size_t> next{0};
  auto loop = [&] {
    for (size_t p = next.fetch_add(1); p < num_parts; p = next.fetch_add(1)) {
      fn(p);
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(pool - 1);
  for (size_t i = 1; i < pool; ++i) threads.emplace_back(loop);
  loop();
  for (std::thread& t : threads) t.join();
}

}  // namespace

absl::StatusOr<Engine> ParseEngine(const std::string& name) {
  if (name == "naive") return Engine::kNaive;
  if (name == "fast") return Engine::kFast;
  return absl::InvalidArgumentError(absl::StrCat("unknown engine '", name, "'"));
}

absl::StatusOr<ClusterId> FreshIdAllocator::Next() {
  if (next_ == std::numeric_limits<ClusterId>::max()) {
    return absl::OutOfRangeError("merged node ids exhausted");
  }
  return next_++;
}

absl::StatusOr<Dendrogram> MergeDendrograms(
    std::span<const NodeId> leaves,
    std::span<const std::vector<MergeRecord>> batches) {
  Dendrogram dendrogram;
  for (NodeId leaf : leaves) TERAHAC_RETURN_IF_ERROR(dendrogram.AddLeaf(leaf));
  for (const std::vector<MergeRecord>& batch : batches) {
    for (const MergeRecord& merge : batch) {
      TERAHAC_RETURN_IF_ERROR(dendrogram.AddMerge(merge));
    }
  }
  return dendrogram;
}

absl::StatusOr<TeraHacResult> RunTeraHac(const ClusterGraph& graph,
                                         const TeraHacOptions& options) {
  const double epsilon = options.epsilon;
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be a non-negative number");
  }
  if (!(options.threshold >= 0.0)) {
    return absl::InvalidArgumentError("threshold must be non-negative");
  }
  if (options.edge_budget < 1) {
    return absl::InvalidArgumentError("edge budget must be positive");
  }
  if (options.workers < 1) {
    return absl::InvalidArgumentError("workers must be positive");
  }
  const Engine engine = options.engine.value_or(
      epsilon > 0.0 ? Engine::kFast : Engine::kNaive);
  if (engine == Engine::kFast && epsilon == 0.0) {
    return absl::InvalidArgumentError(
        "the fast engine needs epsilon > 0; use the naive engine for 0");
  }
  const double alpha = options.alpha.value_or(DefaultAlpha(epsilon));
  if (engine == Engine::kFast && !(alpha > 0.0)) {
    return absl::InvalidArgumentError("alpha must be positive");
  }
  const ClusterGraph::EpochStats& epoch = graph.epoch_stats();
  if (engine == Engine::kFast && epoch.min_weight > 0.0 &&
      epoch.max_weight / epoch.min_weight > kAspectRatioWarning) {
    std::cerr << "warning: weight aspect ratio "
              << epoch.max_weight / epoch.min_weight
              << " exceeds 1e12; broadcast bounds do not apply\n";
  }

  const std::vector<ClusterId> leaves = graph.VertexIds();
  FreshIdAllocator ids(leaves.empty() ? 0 : graph.MaxId() + 1);
  const double prune_cutoff = options.threshold / (1.0 + epsilon);
  std::vector<std::vector<MergeRecord>> batches;
  std::vector<RoundStats> rounds;
  int64_t sequence = 0;

  ClusterGraph current = RemoveIsolated(graph);
  for (int32_t round = 0; CountEdgesAtLeast(current, options.threshold) > 0;
       ++round) {
    const auto start = std::chrono::steady_clock::now();
    RoundStats stats;
    stats.round = round;
    stats.nodes_before = current.NumVertices();
    stats.edges_before = current.NumEdges();

    std::unordered_map<ClusterId, double> wmax;
    wmax.reserve(current.NumVertices());
    for (ClusterId v : current.VertexIds()) wmax[v] = current.Wmax(v);
    if (options.count_good_edges) {
      stats.good_edges = 0;
      stats.one_good_edges = 0;
      for (const EdgeGoodness& e : RecomputeGoodnessTable(current)) {
        if (AtMost(e.goodness, 1.0 + epsilon)) ++stats.good_edges;
        if (AtMost(e.goodness, 1.0)) ++stats.one_good_edges;
      }
    }

    const Partition partition =
        AffinityPartition(current, options.edge_budget);
    std::vector<PartOutput> outputs(partition.parts.size());
    ForEachPart(partition.parts.size(), options.workers, [&](size_t p) {
      PartOutput& out = outputs[p];
      auto local = ExtractLocalSubgraph(current, partition,
                                        static_cast<PartId>(p), &wmax);
      if (!local.ok()) {
        out.status = local.status();
        return;
      }
      absl::StatusOr<SubgraphHacResult> result =
          engine == Engine::kFast ? SubgraphHacFast(*local, epsilon, alpha)
                                  : SubgraphHacNaive(*local, epsilon);
      if (!result.ok()) {
        out.status = result.status();
        return;
      }
      out.result = std::move(result).value();
    });

    std::vector<MergeRecord> batch;
    std::unordered_map<ClusterId, ClusterId> assignment;
    std::unordered_map<ClusterId, double> merge_similarity;
    assignment.reserve(current.NumVertices());
    for (size_t p = 0; p < outputs.size(); ++p) {
      TERAHAC_RETURN_IF_ERROR(outputs[p].status);
      const SubgraphHacResult& result = outputs[p].result;
      std::unordered_map<ClusterId, NodeId> node_of;
      auto node = [&](ClusterId x) {
        auto it = node_of.find(x);
        return it == node_of.end() ? x : it->second;
      };
      for (const LocalMerge& m : result.merges) {
        TERAHAC_ASSIGN_OR_RETURN(const ClusterId merged, ids.Next());
        MergeRecord record;
        record.left = node(m.survivor);
        record.right = node(m.absorbed);
        record.merged = merged;
        record.similarity = m.similarity;
        record.round = round;
        record.sequence_index = sequence++;
        batch.push_back(record);
        node_of[m.survivor] = merged;
      }
      for (ClusterId v : partition.parts[p]) {
        const ClusterId rep = result.assignment.at(v);
        const ClusterId target = node(rep);
        assignment[v] = target;
        auto sim = result.min_internal_similarity.find(rep);
        if (sim != result.min_internal_similarity.end()) {
          merge_similarity[target] = sim->second;
        }
      }
      stats.counters.size_broadcasts += result.counters.size_broadcasts;
      stats.counters.reassignments += result.counters.reassignments;
      stats.counters.unsuccessful_checks += result.counters.unsuccessful_checks;
    }
    stats.merges = static_cast<int64_t>(batch.size());
    batches.push_back(std::move(batch));

    TERAHAC_ASSIGN_OR_RETURN(ClusterGraph contracted,
                             Contract(current, assignment, merge_similarity));
    const int64_t contracted_nodes = contracted.NumVertices();
    current = RemoveIsolated(Prune(contracted, prune_cutoff));
    stats.pruned = contracted_nodes - current.NumVertices();
    stats.nodes_after = current.NumVertices();
    stats.edges_after = current.NumEdges();
    stats.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    if (options.log != nullptr) *options.log << FormatRoundLog(stats) << '\n';
    rounds.push_back(stats);
    if (stats.merges == 0 && stats.pruned == 0) {
      return absl::InternalError(absl::StrCat(
          "round ", round, " made no progress with ", stats.edges_before,
          " edges left"));
    }
  }

  TeraHacResult out;
  TERAHAC_ASSIGN_OR_RETURN(out.dendrogram, MergeDendrograms(leaves, batches));
  out.rounds = std::move(rounds);
  return out;
}

void WriteRoundStatsTsv(std::span<const RoundStats> rounds, std::ostream& out) {
  out << "#round\tnodes_before\tnodes_after\tedges_before\tedges_after\t"
         "merges\tpruned\tgood_edges\tone_good_edges\n";
  auto count = [](int64_t value) {
    return value < 0 ? std::string("NA") : absl::StrCat(value);
  };
  for (const RoundStats& s : rounds) {
    out << s.round << '\t' << s.nodes_before << '\t' << s.nodes_after << '\t'
        << s.edges_before << '\t' << s.edges_after << '\t' << s.merges << '\t'
        << s.pruned << '\t' << count(s.good_edges) << '\t'
        << count(s.one_good_edges) << '\n';
  }
}

std::string FormatRoundLog(const RoundStats& s) {
  std::string line = absl::StrCat(
      "round ", s.round, ": nodes ", s.nodes_before, " -> ", s.nodes_after,
      ", edges ", s.edges_before, " -> ", s.edges_after, ", merges ",
      s.merges, ", pruned ", s.pruned);
  if (s.good_edges >= 0) {
    absl::StrAppend(&line, ", good edges ", s.good_edges, " (1-good ",
                    s.one_good_edges, ")");
  }
  absl::StrAppend(&line, absl::StrFormat(", %.3fs", s.wall_seconds));
  return line;
}

}  // namespace terahac
