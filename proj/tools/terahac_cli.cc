// Command-line front end: clustering, flattening, evaluation, verification
// and synthetic graph generation.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "terahac/check.h"
#include "terahac/cluster_graph.h"
#include "terahac/dendrogram.h"
#include "terahac/driver.h"
#include "terahac/exact_hac.h"
#include "terahac/graph_builders.h"
#include "terahac/metrics.h"
#include "terahac/rmat.h"
#include "terahac/subgraph_hac_fast.h"

namespace terahac {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

int Fail(int code, const absl::Status& status) {
  std::cerr << "error: " << status.message() << '\n';
  return code;
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kResourceExhausted:
      return kExitUsage;
    case absl::StatusCode::kInternal:
      return kExitInvariant;
    default:
      return kExitData;
  }
}

// Output stream for a path; "-" is stdout.
class Output {
 public:
  static absl::StatusOr<std::unique_ptr<Output>> Open(const std::string& path) {
    auto out = std::unique_ptr<Output>(new Output);
    if (path != "-") {
      out->file_.open(path);
      if (!out->file_) {
        return absl::NotFoundError(absl::StrCat("cannot write ", path));
      }
    }
    return out;
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  Output() = default;
  std::ofstream file_;
};

struct GraphArgs {
  std::string input;
  std::string format = "edges";
  int k = 25;
  bool labeled = false;
};

void AddGraphOptions(CLI::App* app, GraphArgs& args) {
  app->add_option("--input", args.input, "Input file")->required();
  app->add_option("--format", args.format, "edges, unweighted-edges or points")
      ->check(CLI::IsMember({"edges", "unweighted-edges", "points"}))
      ->capture_default_str();
  app->add_option("--k", args.k, "Neighbors per point for the points format")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--labeled", args.labeled,
                "Points CSV has a trailing integer label column");
}

absl::StatusOr<ClusterGraph> LoadGraph(const GraphArgs& args) {
  if (args.format == "edges") return LoadEdgeList(args.input);
  if (args.format == "unweighted-edges") {
    TERAHAC_ASSIGN_OR_RETURN(auto edges, LoadUnweightedEdgeList(args.input));
    return DegreeWeighting(edges);
  }
  TERAHAC_ASSIGN_OR_RETURN(PointSet points,
                           LoadPointsCsv(args.input, args.labeled));
  return KnnSimilarityGraph(points, args.k);
}

absl::StatusOr<std::unordered_map<NodeId, int64_t>> LoadLabelsTsv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::unordered_map<NodeId, int64_t> labels;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view text = absl::StripAsciiWhitespace(line);
    if (text.empty() || text.front() == '#') continue;
    std::vector<absl::string_view> fields =
        absl::StrSplit(text, absl::ByAnyChar(" \t"), absl::SkipEmpty());
    NodeId vertex;
    int64_t label;
    if (fields.size() != 2 || !absl::SimpleAtoi(fields[0], &vertex) ||
        !absl::SimpleAtoi(fields[1], &label)) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": line ", line_number, ": expected vertex\\tlabel"));
    }
    if (!labels.emplace(vertex, label).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": line ", line_number, ": duplicate vertex ", vertex));
    }
  }
  return labels;
}

// ---- cluster ----

struct ClusterArgs {
  GraphArgs graph;
  double epsilon = 0.1;
  double threshold = 0.01;
  std::optional<double> alpha;
  std::string engine;
  int64_t edge_budget = kDefaultEdgeBudget;
  int workers = 1;
  std::string output = "-";
  std::string stats;
  int64_t seed = 0;
  bool count_good_edges = false;
  bool verbose = false;
};

int RunCluster(const ClusterArgs& args) {
  if (args.engine == "fast" && args.epsilon == 0.0) {
    return Fail(kExitUsage, absl::InvalidArgumentError(
                                "--engine fast needs --epsilon > 0"));
  }
  auto graph = LoadGraph(args.graph);
  if (!graph.ok()) return Fail(kExitData, graph.status());
  if (args.engine == "exact" && graph->NumVertices() > kExactHacMaxVertices) {
    return Fail(kExitUsage,
                absl::ResourceExhaustedError(absl::StrCat(
                    "--engine exact is limited to ", kExactHacMaxVertices,
                    " vertices; the input has ", graph->NumVertices())));
  }

  Dendrogram dendrogram;
  std::vector<RoundStats> rounds;
  if (args.engine == "exact") {
    auto exact = ExactHac(*graph, args.threshold);
    if (!exact.ok()) return Fail(ExitCodeFor(exact.status()), exact.status());
    dendrogram = std::move(exact).value();
  } else {
    TeraHacOptions options;
    options.epsilon = args.epsilon;
    options.threshold = args.threshold;
    options.alpha = args.alpha;
    if (!args.engine.empty()) {
      auto engine = ParseEngine(args.engine);
      if (!engine.ok()) return Fail(kExitUsage, engine.status());
      options.engine = *engine;
    }
    options.edge_budget = args.edge_budget;
    options.workers = args.workers;
    options.count_good_edges = args.count_good_edges;
    options.log = args.verbose ? &std::cerr : nullptr;
    auto result = RunTeraHac(*graph, options);
    if (!result.ok()) return Fail(ExitCodeFor(result.status()), result.status());
    dendrogram = std::move(result->dendrogram);
    rounds = std::move(result->rounds);
  }

  auto out = Output::Open(args.output);
  if (!out.ok()) return Fail(kExitData, out.status());
  WriteDendrogramTsv(dendrogram, (*out)->stream());
  if (!args.stats.empty()) {
    auto stats = Output::Open(args.stats);
    if (!stats.ok()) return Fail(kExitData, stats.status());
    WriteRoundStatsTsv(rounds, (*stats)->stream());
  }
  return 0;
}

// ---- flatten ----

struct FlattenArgs {
  std::string dendrogram;
  std::optional<double> threshold;
  std::vector<double> threshold_list;
  std::string output = "-";
};

int RunFlatten(const FlattenArgs& args) {
  if (args.threshold.has_value() == !args.threshold_list.empty()) {
    return Fail(kExitUsage, absl::InvalidArgumentError(
                                "give exactly one of --threshold and "
                                "--threshold-list"));
  }
  auto dendrogram = LoadDendrogramTsv(args.dendrogram);
  if (!dendrogram.ok()) return Fail(kExitData, dendrogram.status());
  auto out = Output::Open(args.output);
  if (!out.ok()) return Fail(kExitData, out.status());
  std::ostream& os = (*out)->stream();
  if (args.threshold.has_value()) {
    WriteFlatteningTsv(Flatten(*dendrogram, *args.threshold), os);
    return 0;
  }
  os << "#threshold\tvertex_id\tcluster_id\n";
  for (double t : args.threshold_list) {
    for (const auto& [leaf, cluster] : Flatten(*dendrogram, t)) {
      os << FormatDouble(t) << '\t' << leaf << '\t' << cluster << '\n';
    }
  }
  return 0;
}

// ---- eval ----

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::string dendrogram;
  std::string labels;
  std::string points;
  std::string sim;
  int grid = 256;
  double grid_min = 1e-4;
  double grid_max = 1.0;
  std::string output = "-";
};

int RunEval(const EvalArgs& args) {
  std::vector<std::pair<std::string, double>> report;
  if (!args.pred.empty() || !args.truth.empty()) {
    if (args.pred.empty() || args.truth.empty()) {
      return Fail(kExitUsage, absl::InvalidArgumentError(
                                  "--pred and --truth go together"));
    }
    auto pred = LoadLabelsTsv(args.pred);
    if (!pred.ok()) return Fail(kExitData, pred.status());
    auto truth = LoadLabelsTsv(args.truth);
    if (!truth.ok()) return Fail(kExitData, truth.status());
    std::vector<NodeId> vertices;
    for (const auto& [v, label] : *truth) vertices.push_back(v);
    std::sort(vertices.begin(), vertices.end());
    if (pred->size() != truth->size()) {
      return Fail(kExitData, absl::InvalidArgumentError(
                                 "--pred and --truth cover different vertices"));
    }
    std::vector<int64_t> p, t;
    for (NodeId v : vertices) {
      auto it = pred->find(v);
      if (it == pred->end()) {
        return Fail(kExitData, absl::InvalidArgumentError(absl::StrCat(
                                   "vertex ", v, " missing from --pred")));
      }
      p.push_back(it->second);
      t.push_back(truth->at(v));
    }
    auto ari = AdjustedRandIndex(p, t);
    if (!ari.ok()) return Fail(kExitData, ari.status());
    auto nmi = NormalizedMutualInformation(p, t);
    if (!nmi.ok()) return Fail(kExitData, nmi.status());
    report.emplace_back("ari", *ari);
    report.emplace_back("nmi", *nmi);
  }

  if (!args.dendrogram.empty()) {
    auto dendrogram = LoadDendrogramTsv(args.dendrogram);
    if (!dendrogram.ok()) return Fail(kExitData, dendrogram.status());
    std::unordered_map<NodeId, int64_t> labels;
    std::vector<WeightedEdge> similarities;
    if (!args.points.empty()) {
      auto points = LoadPointsCsv(args.points, /*trailing_label=*/true);
      if (!points.ok()) return Fail(kExitData, points.status());
      for (size_t i = 0; i < points->labels.size(); ++i) {
        labels[static_cast<NodeId>(i)] = points->labels[i];
      }
      similarities = CompleteSimilarityEdges(*points);
    }
    if (!args.sim.empty()) {
      auto sim = LoadEdgeList(args.sim);
      if (!sim.ok()) return Fail(kExitData, sim.status());
      similarities = sim->LinkageEdges();
    }
    if (!args.labels.empty()) {
      auto loaded = LoadLabelsTsv(args.labels);
      if (!loaded.ok()) return Fail(kExitData, loaded.status());
      labels = std::move(loaded).value();
    }
    if (labels.empty()) {
      return Fail(kExitUsage, absl::InvalidArgumentError(
                                  "--dendrogram needs --labels or --points"));
    }
    const std::vector<double> grid =
        GeometricThresholds(args.grid_min, args.grid_max, args.grid);
    auto sweep = BestOverThresholds(*dendrogram, labels, grid);
    if (!sweep.ok()) return Fail(kExitData, sweep.status());
    auto purity = DendrogramPurity(*dendrogram, labels);
    if (!purity.ok()) return Fail(kExitData, purity.status());
    report.emplace_back("best_ari", sweep->best_ari);
    report.emplace_back("best_ari_threshold", sweep->ari_threshold);
    report.emplace_back("best_nmi", sweep->best_nmi);
    report.emplace_back("best_nmi_threshold", sweep->nmi_threshold);
    report.emplace_back("dendrogram_purity", *purity);
    if (!similarities.empty()) {
      auto cost = DasguptaCost(*dendrogram, similarities);
      if (!cost.ok()) return Fail(kExitData, cost.status());
      report.emplace_back("dasgupta_cost", *cost);
    }
  }
  if (report.empty()) {
    return Fail(kExitUsage, absl::InvalidArgumentError(
                                "give --pred/--truth or --dendrogram"));
  }
  auto out = Output::Open(args.output);
  if (!out.ok()) return Fail(kExitData, out.status());
  WriteMetricReport(report, (*out)->stream());
  return 0;
}

// ---- verify ----

struct VerifyArgs {
  GraphArgs graph;
  std::string dendrogram;
  double epsilon = 0.1;
  std::optional<double> threshold;
};

int RunVerify(const VerifyArgs& args) {
  auto graph = LoadGraph(args.graph);
  if (!graph.ok()) return Fail(kExitData, graph.status());
  auto dendrogram = LoadDendrogramTsv(args.dendrogram);
  if (!dendrogram.ok()) return Fail(kExitData, dendrogram.status());
  if (auto valid = dendrogram->Validate(); !valid.ok()) {
    return Fail(kExitData, valid);
  }
  auto ratio = EmpiricalApproximationRatio(*dendrogram, *graph);
  if (!ratio.ok()) return Fail(kExitData, ratio.status());
  const double bound = 1.0 + args.epsilon;
  bool pass = *ratio <= bound * (1.0 + 1e-9);
  std::cout << "approximation_ratio\t" << FormatDouble(*ratio) << '\n'
            << "bound\t" << FormatDouble(bound) << '\n';
  if (args.threshold.has_value()) {
    const bool floor_ok =
        FlattenMinSimilarityCheck(*dendrogram, *args.threshold, args.epsilon);
    std::cout << "flatten_floor\t" << (floor_ok ? "ok" : "violated") << '\n';
    pass = pass && floor_ok;
  }
  std::cout << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? 0 : kExitInvariant;
}

// ---- rmat ----

struct RmatArgs {
  RmatOptions options;
  std::string output = "-";
};

int RunRmat(const RmatArgs& args) {
  RmatReport report;
  auto graph = RmatGraph(args.options, &report);
  if (!graph.ok()) return Fail(kExitUsage, graph.status());
  auto out = Output::Open(args.output);
  if (!out.ok()) return Fail(kExitData, out.status());
  WriteEdgeList(*graph, (*out)->stream());
  std::cerr << "samples=" << report.samples
            << " self_loops=" << report.self_loops
            << " unique_edges=" << report.unique_edges
            << " dropped_isolated_edges=" << report.isolated_edges_dropped
            << " vertices=" << graph->NumVertices()
            << " edges=" << graph->NumEdges() << '\n';
  return 0;
}

// ---- stats ----

int RunStats(const GraphArgs& args) {
  auto graph = LoadGraph(args);
  if (!graph.ok()) return Fail(kExitData, graph.status());
  std::cout << FormatGraphStats(ComputeGraphStats(*graph));
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Approximate average-linkage hierarchical clustering"};
  app.set_config("--config", "",
                 "TOML/INI file of flag defaults; [cluster] style sections "
                 "hold subcommand flags");
  app.require_subcommand(1);

  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand("cluster", "Build a dendrogram");
  AddGraphOptions(cluster, cluster_args.graph);
  cluster->add_option("--epsilon", cluster_args.epsilon, "Approximation slack")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cluster->add_option("--threshold", cluster_args.threshold,
                      "Stop once no edge weighs at least this much")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cluster->add_option("--alpha", cluster_args.alpha,
                      "Lazy-update slack of the fast engine")
      ->check(CLI::PositiveNumber);
  cluster->add_option("--engine", cluster_args.engine, "naive, fast or exact")
      ->check(CLI::IsMember({"naive", "fast", "exact"}));
  cluster->add_option("--edge-budget", cluster_args.edge_budget,
                      "Edge budget per part")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster->add_option("--workers", cluster_args.workers, "Worker threads")
      ->envname("TERAHAC_WORKERS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster->add_option("--output", cluster_args.output, "Dendrogram TSV")
      ->capture_default_str();
  cluster->add_option("--stats", cluster_args.stats, "Per-round stats TSV");
  cluster->add_option("--seed", cluster_args.seed,
                      "Accepted for scripting; clustering is deterministic");
  cluster->add_flag("--count-good-edges", cluster_args.count_good_edges,
                    "Count good edges at the start of each round");
  cluster->add_flag("--verbose", cluster_args.verbose, "Log each round");

  FlattenArgs flatten_args;
  CLI::App* flatten = app.add_subcommand("flatten", "Cut a dendrogram");
  flatten->add_option("--dendrogram", flatten_args.dendrogram, "Dendrogram TSV")
      ->required();
  flatten->add_option("--threshold", flatten_args.threshold, "Cut threshold");
  flatten->add_option("--threshold-list", flatten_args.threshold_list,
                      "Comma separated thresholds")
      ->delimiter(',');
  flatten->add_option("--output", flatten_args.output, "Clustering TSV")
      ->capture_default_str();

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Score clusterings");
  eval->add_option("--pred", eval_args.pred, "Predicted vertex\\tlabel TSV");
  eval->add_option("--truth", eval_args.truth, "True vertex\\tlabel TSV");
  eval->add_option("--dendrogram", eval_args.dendrogram, "Dendrogram TSV");
  eval->add_option("--labels", eval_args.labels, "Class vertex\\tlabel TSV");
  eval->add_option("--points", eval_args.points,
                   "Labeled points CSV; supplies classes and similarities");
  eval->add_option("--sim", eval_args.sim,
                   "Similarity edge list over all leaf pairs for the Dasgupta "
                   "cost; overrides the one derived from --points");
  eval->add_option("--grid", eval_args.grid, "Thresholds in the sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval->add_option("--grid-min", eval_args.grid_min)->capture_default_str();
  eval->add_option("--grid-max", eval_args.grid_max)->capture_default_str();
  eval->add_option("--output", eval_args.output, "Metric TSV")
      ->capture_default_str();

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Measure the approximation ratio of a dendrogram");
  AddGraphOptions(verify, verify_args.graph);
  verify->add_option("--dendrogram", verify_args.dendrogram, "Dendrogram TSV")
      ->required();
  verify->add_option("--epsilon", verify_args.epsilon)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--threshold", verify_args.threshold,
                     "Also check the flatten floor at this threshold");

  RmatArgs rmat_args;
  CLI::App* rmat = app.add_subcommand("rmat", "Generate an rMAT graph");
  rmat->add_option("--scale", rmat_args.options.scale, "log2 of vertex count")
      ->check(CLI::Range(1, kMaxRmatScale))
      ->capture_default_str();
  rmat->add_option("--edge-factor", rmat_args.options.edge_factor)
      ->capture_default_str();
  rmat->add_option("--a", rmat_args.options.a)->capture_default_str();
  rmat->add_option("--b", rmat_args.options.b)->capture_default_str();
  rmat->add_option("--c", rmat_args.options.c)->capture_default_str();
  rmat->add_option("--d", rmat_args.options.d)->capture_default_str();
  rmat->add_option("--seed", rmat_args.options.seed)->capture_default_str();
  rmat->add_option("--output", rmat_args.output, "Edge list TSV")
      ->capture_default_str();

  GraphArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Print graph statistics");
  AddGraphOptions(stats, stats_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (cluster->parsed()) return RunCluster(cluster_args);
  if (flatten->parsed()) return RunFlatten(flatten_args);
  if (eval->parsed()) return RunEval(eval_args);
  if (verify->parsed()) return RunVerify(verify_args);
  if (rmat->parsed()) return RunRmat(rmat_args);
  return RunStats(stats_args);
}

}  // namespace
}  // namespace terahac

int main(int argc, char** argv) { return terahac::Main(argc, argv); }
