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

#ifndef VECNBT_PIPELINE_H_
#define VECNBT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vecnbt/cluster.h"
#include "vecnbt/embed.h"
#include "vecnbt/graph.h"
#include "vecnbt/metrics.h"
#include "vecnbt/walks.h"

namespace vecnbt {

struct StageTimes {
  double walk_seconds = 0;
  double embed_seconds = 0;
  double cluster_seconds = 0;
  double total() const { return walk_seconds + embed_seconds + cluster_seconds; }
};

struct PipelineResult {
  LabelVector labels;
  std::optional<MetricsReport> metrics;
  StageTimes times;
  int64_t corpus_sentences = 0;
};

// Walk corpus -> SGNS embedding -> k-means on the embedding rows. `embed`
// supplies the skip-gram window. Metrics are computed when `truth` is given;
// with mask_isolated, degree-0 nodes are left out of them.
PipelineResult RunPipeline(const Graph& g, int k, const WalkParams& walk,
                           const SgnsParams& embed, const KMeansParams& cluster,
                           const LabelVector* truth = nullptr,
                           bool mask_isolated = false);

// One algorithm arm of an experiment: a walk policy with its own r, w and
// list of walk lengths.
struct ArmConfig {
  std::string name;
  WalkPolicy policy = WalkPolicy::kSimple;
  int walks_per_node = 10;
  std::vector<int> lengths;
  int window = 8;
};

struct ExperimentConfig {
  std::vector<int> n_values{1000};
  std::vector<int> k_values{2};
  std::vector<double> c_values{10};
  std::vector<double> lambda_values{0.9};
  std::vector<ArmConfig> arms;
  SgnsParams embed;
  KMeansParams cluster;
  int trials = 1;
  uint64_t seed = 1;
  bool mask_isolated = false;
  int workers = 1;
  // When false the wall_time_seconds column is written as 0 so repeated
  // runs produce identical files.
  bool record_wall_time = true;

  void Validate() const;
};

// BT arm: simple walks, r = 10, l = 60, w = 8. NBT arm: begrudging walks,
// r = 20, l = 10, w = 5. d = 50, lambda = 0.9.
ExperimentConfig DefaultExperimentConfig();

// Missing keys keep their DefaultExperimentConfig values. Throws
// std::invalid_argument on unknown keys or invalid values.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& j);
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);

struct ResultRow {
  std::string arm;
  int n = 0;
  int k = 0;
  double c = 0;
  double lambda = 0;
  int l = 0;
  int r = 0;
  int w = 0;
  int trial = 0;
  double ccr = 0;
  double nmi = 0;
  double wall_time_seconds = 0;
};

// "arm,n,k,c,lambda,l,r,w,trial,ccr,nmi,wall_time_seconds"
const std::string& ResultCsvHeader();
std::string FormatResultRow(const ResultRow& row);
// Columns identifying a row: everything before ccr.
std::string ResultRowKey(const ResultRow& row);
// Throws FormatError on a header mismatch or malformed row.
std::vector<ResultRow> ReadResultRows(std::istream& in);
std::vector<ResultRow> ReadResultRowsFile(const std::filesystem::path& path);

// Seed of the SBM graph for one cell and trial. Shared by all arms so both
// arms of a trial see the same graph.
uint64_t CellGraphSeed(uint64_t master, int n, int k, double c, double lambda,
                       int trial);

struct SweepSummary {
  int64_t rows_written = 0;
  int64_t rows_skipped = 0;
};

// One CSV row per (n, k, c, lambda, trial, arm, l), in that nesting order,
// regardless of the number of workers. Rows already present in `output`
// (matched by key) are skipped and new rows appended. Progress lines go to
// `log` when non-null.
SweepSummary RunSweep(const ExperimentConfig& config,
                      const std::filesystem::path& output,
                      std::ostream* log = nullptr);

}  // namespace vecnbt

#endif  // VECNBT_PIPELINE_H_
