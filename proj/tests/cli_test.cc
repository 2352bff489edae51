#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "terahac/dendrogram.h"
#include "terahac/driver.h"
#include "terahac/graph_builders.h"
#include "terahac/rmat.h"
#include "test_util.h"

namespace terahac {
namespace {

using ::terahac::testing::RandomGraph;
using ::terahac::testing::ValueOrDie;
using ::testing::HasSubstr;
using ::testing::StartsWith;

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/terahac_cli_" + name;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

void WriteDendrogram(const std::string& path, std::vector<NodeId> leaves,
                     std::vector<MergeRecord> merges) {
  std::ofstream out(path);
  WriteDendrogramTsv(ValueOrDie(Dendrogram::Build(leaves, merges)), out);
}

// Runs the CLI with `args`; stdout goes to `stdout_path` when given.
int RunCli(const std::string& args, const std::string& stdout_path = "",
           const std::string& env = "") {
  std::string command = env + " " + TERAHAC_CLI_PATH + " " + args;
  command += stdout_path.empty() ? " > /dev/null" : " > " + stdout_path;
  command += " 2> " + TempPath("stderr");
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    graph_ = TempPath("graph.tsv");
    std::ofstream out(graph_);
    WriteEdgeList(RandomGraph(120, 4.0, 9), out);
  }
  std::string graph_;
};

TEST_F(CliTest, ClusterMatchesLibrary) {
  const std::string dendrogram = TempPath("d.tsv");
  ASSERT_EQ(RunCli("cluster --input " + graph_ +
                   " --epsilon 0.1 --threshold 0.05 --output " + dendrogram),
            0);
  TeraHacOptions options;
  options.epsilon = 0.1;
  options.threshold = 0.05;
  TeraHacResult r = ValueOrDie(RunTeraHac(ValueOrDie(LoadEdgeList(graph_)), options));
  std::ostringstream expected;
  WriteDendrogramTsv(r.dendrogram, expected);
  EXPECT_EQ(ReadFile(dendrogram), expected.str());

  const std::string flat = TempPath("flat.tsv");
  ASSERT_EQ(RunCli("flatten --dendrogram " + dendrogram + " --threshold 0.05", flat), 0);
  std::ostringstream expected_flat;
  WriteFlatteningTsv(Flatten(r.dendrogram, 0.05), expected_flat);
  EXPECT_EQ(ReadFile(flat), expected_flat.str());

  const std::string verify = TempPath("verify.txt");
  EXPECT_EQ(RunCli("verify --input " + graph_ + " --dendrogram " + dendrogram +
                       " --epsilon 0.1 --threshold 0.05",
                   verify),
            0);
  EXPECT_THAT(ReadFile(verify), HasSubstr("flatten_floor\tok\nPASS\n"));
}

TEST_F(CliTest, ThresholdList) {
  const std::string dendrogram = TempPath("d.tsv");
  ASSERT_EQ(RunCli("cluster --input " + graph_ + " --threshold 0 --output " + dendrogram), 0);
  const std::string flat = TempPath("flat.tsv");
  ASSERT_EQ(RunCli("flatten --dendrogram " + dendrogram + " --threshold-list 0.1,0.5", flat), 0);
  const std::string text = ReadFile(flat);
  EXPECT_THAT(text, StartsWith("#threshold\tvertex_id\tcluster_id\n0.1\t"));
  EXPECT_THAT(text, HasSubstr("\n0.5\t"));
  EXPECT_EQ(RunCli("flatten --dendrogram " + dendrogram), 1);
}

TEST_F(CliTest, WorkersAndStatsAreStable) {
  std::string reference;
  for (const std::string& env : {std::string("TERAHAC_WORKERS=1"),
                                 std::string("TERAHAC_WORKERS=4")}) {
    const std::string stats = TempPath("stats.tsv");
    const std::string out = TempPath("d.tsv");
    ASSERT_EQ(RunCli("cluster --input " + graph_ + " --edge-budget 40 --stats " +
                         stats + " --output " + out,
                     "", env),
              0);
    const std::string both = ReadFile(out) + ReadFile(stats);
    if (reference.empty()) {
      reference = both;
    } else {
      EXPECT_EQ(both, reference);
    }
  }
  EXPECT_THAT(reference, HasSubstr("#round\tnodes_before"));
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  const std::string config = TempPath("config.toml");
  WriteFile(config, "[cluster]\nepsilon = 0.5\nthreshold = 0.2\n");
  const std::string from_config = TempPath("c.tsv");
  const std::string from_flags = TempPath("f.tsv");
  const std::string overridden = TempPath("o.tsv");
  ASSERT_EQ(RunCli("--config " + config + " cluster --input " + graph_ +
                   " --output " + from_config),
            0);
  ASSERT_EQ(RunCli("cluster --input " + graph_ +
                   " --epsilon 0.5 --threshold 0.2 --output " + from_flags),
            0);
  ASSERT_EQ(RunCli("--config " + config + " cluster --input " + graph_ +
                   " --threshold 0.9 --output " + overridden),
            0);
  EXPECT_EQ(ReadFile(from_config), ReadFile(from_flags));
  EXPECT_NE(ReadFile(overridden), ReadFile(from_flags));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli("cluster --input " + graph_ + " --epsilon 0 --engine fast"), 1);
  EXPECT_EQ(RunCli("cluster --input " + graph_ + " --engine bogus"), 1);
  EXPECT_EQ(RunCli("cluster"), 1);
  EXPECT_EQ(RunCli("--help"), 0);
  const std::string bad = TempPath("bad.tsv");
  WriteFile(bad, "0\t1\tnot-a-number\n");
  EXPECT_EQ(RunCli("cluster --input " + bad), 2);
  EXPECT_THAT(ReadFile(TempPath("stderr")), StartsWith("error: "));
  EXPECT_EQ(RunCli("cluster --input " + TempPath("missing.tsv")), 2);
  EXPECT_EQ(RunCli("rmat --scale 4 --a 0.9"), 1);
}

TEST_F(CliTest, VerifyFailsOnBadDendrogram) {
  // Merging the light pair first is far from the heavy pair's weight.
  const std::string graph = TempPath("path.tsv");
  WriteFile(graph, "0\t1\t1.0\n1\t2\t0.1\n");
  const std::string dendrogram = TempPath("bad_d.tsv");
  WriteDendrogram(dendrogram, {0, 1, 2},
                  {{.left = 1, .right = 2, .merged = 3, .similarity = 0.1},
                   {.left = 3, .right = 0, .merged = 4, .similarity = 0.55}});
  const std::string verify = TempPath("verify.txt");
  EXPECT_EQ(RunCli("verify --input " + graph + " --dendrogram " + dendrogram, verify), 3);
  EXPECT_THAT(ReadFile(verify), HasSubstr("FAIL"));
}

TEST_F(CliTest, EvalPredTruth) {
  const std::string pred = TempPath("pred.tsv");
  const std::string truth = TempPath("truth.tsv");
  WriteFile(pred, "0\t5\n1\t5\n2\t6\n3\t6\n");
  WriteFile(truth, "#vertex\tlabel\n0\t0\n1\t0\n2\t1\n3\t1\n");
  const std::string report = TempPath("report.tsv");
  ASSERT_EQ(RunCli("eval --pred " + pred + " --truth " + truth, report), 0);
  EXPECT_EQ(ReadFile(report), "#metric\tvalue\nari\t1\nnmi\t1\n");
}

TEST_F(CliTest, EvalDendrogramWithSimilarities) {
  const std::string dendrogram = TempPath("d2.tsv");
  WriteDendrogram(dendrogram, {0, 1},
                  {{.left = 0, .right = 1, .merged = 2, .similarity = 1.0}});
  const std::string labels = TempPath("labels.tsv");
  WriteFile(labels, "0\t0\n1\t0\n");
  const std::string sim = TempPath("sim.tsv");
  WriteFile(sim, "0\t1\t1.5\n");
  const std::string report = TempPath("report.tsv");
  ASSERT_EQ(RunCli("eval --dendrogram " + dendrogram + " --labels " + labels +
                       " --sim " + sim,
                   report),
            0);
  const std::string text = ReadFile(report);
  EXPECT_THAT(text, HasSubstr("dendrogram_purity\t1\n"));
  EXPECT_THAT(text, HasSubstr("dasgupta_cost\t3\n"));
}

TEST_F(CliTest, RmatIsDeterministic) {
  const std::string a = TempPath("a.tsv");
  const std::string b = TempPath("b.tsv");
  ASSERT_EQ(RunCli("rmat --scale 8 --edge-factor 4 --seed 3", a), 0);
  ASSERT_EQ(RunCli("rmat --scale 8 --edge-factor 4 --seed 3", b), 0);
  EXPECT_EQ(ReadFile(a), ReadFile(b));
  std::ostringstream expected;
  WriteEdgeList(ValueOrDie(RmatGraph({.scale = 8, .edge_factor = 4, .seed = 3})),
                expected);
  EXPECT_EQ(ReadFile(a), expected.str());
}

TEST_F(CliTest, StatsAndPoints) {
  const std::string out = TempPath("stats.txt");
  ASSERT_EQ(RunCli("stats --input " + graph_, out), 0);
  EXPECT_THAT(ReadFile(out), StartsWith("n=120\n"));
  ASSERT_EQ(RunCli("stats --format points --labeled --k 5 --input " +
                    std::string(TERAHAC_DATA_DIR) + "/iris.csv",
                out),
            0);
  EXPECT_THAT(ReadFile(out), StartsWith("n=150\n"));
}

}  // namespace
}  // namespace terahac
