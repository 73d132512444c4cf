// Copyright 2026 The vecnbt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "vecnbt/pipeline.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vecnbt/io.h"

namespace vecnbt {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path TempPath(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "vecnbt_pipeline_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  fs::remove(p);
  return p;
}

// Small, fast sweep settings; the row bookkeeping does not depend on scale.
ExperimentConfig TinyConfig() {
  ExperimentConfig config = DefaultExperimentConfig();
  config.n_values = {60};
  config.c_values = {4};
  config.arms[0].lengths = {6};
  config.arms[1].lengths = {4};
  config.arms[0].walks_per_node = 2;
  config.arms[1].walks_per_node = 2;
  config.embed.dim = 4;
  config.embed.epochs = 1;
  config.cluster.restarts = 1;
  config.record_wall_time = false;
  return config;
}

TEST(PipelineTest, TwoDisjointCliquesArePerfectlyClustered) {
  std::vector<Edge> edges;
  LabelVector truth(40);
  for (NodeId base : {0, 20}) {
    for (NodeId i = 0; i < 20; ++i) {
      truth[base + i] = base / 20;
      for (NodeId j = i + 1; j < 20; ++j) edges.push_back({base + i, base + j});
    }
  }
  Graph g = Graph::FromEdges(40, edges);
  PipelineResult r = RunPipeline(
      g, 2, {.walks_per_node = 20, .length = 10,
             .policy = WalkPolicy::kBegrudging},
      {.window = 5}, {.k = 2}, &truth);
  ASSERT_TRUE(r.metrics.has_value());
  EXPECT_DOUBLE_EQ(r.metrics->ccr, 1.0);
  EXPECT_NEAR(r.metrics->nmi, 1.0, 1e-12);
  EXPECT_EQ(r.corpus_sentences, 800);
}

TEST(PipelineTest, DegeneratePredictor) {
  LabelVector truth = {0, 0, 0, 1, 1, 1};
  LabelVector same(6, 0);
  MetricsReport rep = Score(truth, same);
  EXPECT_DOUBLE_EQ(rep.ccr, 0.5);
  EXPECT_DOUBLE_EQ(rep.nmi, 0.0);
}

TEST(PipelineTest, MaskIsolatedExcludesDegreeZeroNodes) {
  SbmSample s = GenerateSbm({.n = 200, .k = 2, .c = 2, .lambda = 0.9});
  int64_t positive = 0;
  for (NodeId v = 0; v < 200; ++v) positive += Degree(s.graph, v) > 0;
  ASSERT_LT(positive, 200);
  PipelineResult r = RunPipeline(
      s.graph, 2, {.walks_per_node = 2, .length = 5}, {.dim = 4, .epochs = 1},
      {.k = 2, .restarts = 1}, &s.labels, true);
  EXPECT_EQ(r.metrics->scored_nodes, positive);
  EXPECT_EQ(r.labels.size(), 200u);
}

TEST(PipelineTest, TruthLengthMismatchThrows) {
  Graph g = Graph::FromEdges(3, std::vector<Edge>{{0, 1}, {1, 2}});
  LabelVector truth = {0, 1};
  EXPECT_THROW(RunPipeline(g, 2, {}, {}, {}, &truth), std::invalid_argument);
}

TEST(ConfigTest, DefaultsMatchThePaperArms) {
  ExperimentConfig c = DefaultExperimentConfig();
  ASSERT_EQ(c.arms.size(), 2u);
  EXPECT_EQ(c.arms[0].name, "BT");
  EXPECT_EQ(c.arms[0].policy, WalkPolicy::kSimple);
  EXPECT_EQ(c.arms[0].walks_per_node, 10);
  EXPECT_EQ(c.arms[0].lengths, std::vector<int>{60});
  EXPECT_EQ(c.arms[0].window, 8);
  EXPECT_EQ(c.arms[1].name, "NBT");
  EXPECT_EQ(c.arms[1].policy, WalkPolicy::kBegrudging);
  EXPECT_EQ(c.arms[1].walks_per_node, 20);
  EXPECT_EQ(c.arms[1].window, 5);
  EXPECT_EQ(c.embed.dim, 50);
  EXPECT_DOUBLE_EQ(c.lambda_values[0], 0.9);
}

TEST(ConfigTest, ParseAndRoundTrip) {
  auto j = nlohmann::json::parse(R"({
    "sbm": {"n": [500, 1000], "c": [3, 4.5], "lambda": [0.8]},
    "arms": [{"name": "NBT", "policy": "begrudging", "r": 20, "l": [5, 10],
              "w": 5}],
    "embed": {"dim": 16, "epochs": 2},
    "trials": 4, "seed": 9, "mask_isolated": true
  })");
  ExperimentConfig c = ParseExperimentConfig(j);
  EXPECT_EQ(c.n_values, (std::vector<int>{500, 1000}));
  EXPECT_EQ(c.c_values, (std::vector<double>{3, 4.5}));
  EXPECT_EQ(c.k_values, std::vector<int>{2});
  ASSERT_EQ(c.arms.size(), 1u);
  EXPECT_EQ(c.arms[0].lengths, (std::vector<int>{5, 10}));
  EXPECT_EQ(c.embed.dim, 16);
  EXPECT_EQ(c.trials, 4);
  EXPECT_TRUE(c.mask_isolated);
  ExperimentConfig again = ParseExperimentConfig(ExperimentConfigToJson(c));
  EXPECT_EQ(ExperimentConfigToJson(again), ExperimentConfigToJson(c));
}

TEST(ConfigTest, RejectsBadInput) {
  EXPECT_THROW(ParseExperimentConfig(nlohmann::json::parse(R"({"trails": 3})")),
               std::invalid_argument);
  EXPECT_THROW(ParseExperimentConfig(nlohmann::json::parse(R"({"trials": 0})")),
               std::invalid_argument);
  EXPECT_THROW(ParseExperimentConfig(
                   nlohmann::json::parse(R"({"sbm": {"n": [10], "c": [20]}})")),
               std::invalid_argument);
  EXPECT_THROW(ParseExperimentConfig(nlohmann::json::parse(
                   R"({"arms": [{"name": "X", "policy": "lazy"}]})")),
               std::invalid_argument);
}

TEST(ResultRowTest, CsvRoundTrip) {
  ResultRow row{"NBT", 1000, 2, 4.5, 0.9, 10, 20, 5, 3, 0.75, 0.125, 1.5};
  std::stringstream buf;
  buf << ResultCsvHeader() << '\n' << FormatResultRow(row) << '\n';
  auto rows = ReadResultRows(buf);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(FormatResultRow(rows[0]), FormatResultRow(row));
  EXPECT_EQ(ResultCsvHeader(),
            "arm,n,k,c,lambda,l,r,w,trial,ccr,nmi,wall_time_seconds");
  std::stringstream bad("arm,n\nBT,1\n");
  EXPECT_THROW(ReadResultRows(bad), FormatError);
}

TEST(SweepTest, RowCountForNineteenSparsities) {
  ExperimentConfig config = TinyConfig();
  config.c_values.clear();
  for (int c = 2; c <= 20; ++c) config.c_values.push_back(c);
  config.trials = 3;
  fs::path out = TempPath("count.csv");
  SweepSummary s = RunSweep(config, out);
  EXPECT_EQ(s.rows_written, 114);
  auto rows = ReadResultRowsFile(out);
  EXPECT_EQ(rows.size(), 114u);
  for (const ResultRow& r : rows) {
    EXPECT_GE(r.ccr, 0.5);
    EXPECT_LE(r.ccr, 1.0);
    EXPECT_GE(r.nmi, 0.0);
    EXPECT_LE(r.nmi, 1.0);
  }
}

TEST(SweepTest, DeterministicAndWorkerIndependent) {
  ExperimentConfig config = TinyConfig();
  config.c_values = {3, 6};
  config.trials = 2;
  fs::path a = TempPath("a.csv"), b = TempPath("b.csv");
  RunSweep(config, a);
  config.workers = 3;
  RunSweep(config, b);
  EXPECT_EQ(Slurp(a), Slurp(b));
  config.seed = 2;
  fs::path c = TempPath("c.csv");
  RunSweep(config, c);
  EXPECT_NE(Slurp(a), Slurp(c));
}

TEST(SweepTest, ResumeSkipsExistingRows) {
  ExperimentConfig config = TinyConfig();
  config.c_values = {3, 6};
  config.trials = 2;
  fs::path full = TempPath("full.csv"), part = TempPath("part.csv");
  RunSweep(config, full);

  ExperimentConfig first = config;
  first.c_values = {3};
  EXPECT_EQ(RunSweep(first, part).rows_written, 4);
  SweepSummary rest = RunSweep(config, part);
  EXPECT_EQ(rest.rows_skipped, 4);
  EXPECT_EQ(rest.rows_written, 4);
  EXPECT_EQ(Slurp(part), Slurp(full));
  EXPECT_EQ(RunSweep(config, part).rows_written, 0);
}

TEST(SweepTest, ArmsShareTheTrialGraph) {
  EXPECT_EQ(CellGraphSeed(1, 1000, 2, 4, 0.9, 0),
            CellGraphSeed(1, 1000, 2, 4, 0.9, 0));
  EXPECT_NE(CellGraphSeed(1, 1000, 2, 4, 0.9, 0),
            CellGraphSeed(1, 1000, 2, 4, 0.9, 1));
  EXPECT_NE(CellGraphSeed(1, 1000, 2, 4, 0.9, 0),
            CellGraphSeed(1, 1000, 2, 5, 0.9, 0));
}

}  // namespace
}  // namespace vecnbt
