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

// Command-line front end: SBM generation, walks, embedding, clustering,
// scoring, the end-to-end pipeline, experiment sweeps, spectral reports and
// plots.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vecnbt/cluster.h"
#include "vecnbt/embed.h"
#include "vecnbt/graph.h"
#include "vecnbt/io.h"
#include "vecnbt/metrics.h"
#include "vecnbt/pipeline.h"
#include "vecnbt/plot.h"
#include "vecnbt/spectral.h"
#include "vecnbt/walks.h"

namespace {

using namespace vecnbt;

void AddSgnsOptions(CLI::App* cmd, SgnsParams& p) {
  cmd->add_option("--dim", p.dim, "Embedding dimension")->capture_default_str();
  cmd->add_option("--window", p.window, "Skip-gram window w")
      ->capture_default_str();
  cmd->add_option("--negatives", p.negatives, "Negative samples per pair")
      ->capture_default_str();
  cmd->add_option("--epochs", p.epochs)->capture_default_str();
  cmd->add_option("--lr", p.lr_initial, "Initial learning rate")
      ->capture_default_str();
  cmd->add_option("--lr-final", p.lr_final)->capture_default_str();
  cmd->add_option("--threads", p.num_threads,
                  "Training threads (1 = deterministic)")
      ->capture_default_str();
}

void AddKMeansOptions(CLI::App* cmd, KMeansParams& p) {
  cmd->add_option("--restarts", p.restarts)->capture_default_str();
  cmd->add_option("--max-iters", p.max_iters)->capture_default_str();
  cmd->add_option("--tol", p.tol)->capture_default_str();
}

void PrintMetrics(const MetricsReport& m) {
  std::cout << "ccr,nmi\n"
            << FormatDouble(m.ccr) << ',' << FormatDouble(m.nmi) << '\n';
}

nlohmann::json ReportJson(const MixingReport& r) {
  return {{"degree", r.degree},
          {"lambda2", r.lambda2},
          {"lambda2_modulus", r.lambda2_modulus},
          {"rho", r.rho},
          {"rho_modulus", r.rho_modulus},
          {"rho_nbt", r.rho_nbt},
          {"ratio", r.ratio},
          {"regime", std::string(MixingRegimeName(r.regime))},
          {"ratio_lower", r.ratio_lower},
          {"ratio_upper", r.ratio_upper}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VEC / VEC-NBT graph clustering toolkit"};
  app.require_subcommand(1);
  uint64_t seed = 1;
  app.add_option("--seed", seed, "Master random seed")->capture_default_str();

  // generate
  SbmParams sbm;
  std::string edges_out, labels_out;
  auto* generate = app.add_subcommand("generate", "Sample an SBM graph");
  generate->add_option("--n", sbm.n)->capture_default_str();
  generate->add_option("--k", sbm.k)->capture_default_str();
  generate->add_option("--c", sbm.c)->capture_default_str();
  generate->add_option("--lambda", sbm.lambda)->capture_default_str();
  generate->add_option("--edges", edges_out, "Edge list output")->required();
  generate->add_option("--labels", labels_out, "Ground-truth labels output")
      ->required();

  // walk
  std::string graph_in, corpus_out, policy_name = "begrudging";
  WalkParams walk;
  walk.walks_per_node = 20;
  walk.length = 10;
  auto* walk_cmd = app.add_subcommand("walk", "Build a walk corpus");
  walk_cmd->add_option("--graph", graph_in)->required();
  walk_cmd->add_option("--policy", policy_name,
                       "simple | nonbacktracking | begrudging")
      ->capture_default_str();
  walk_cmd->add_option("--r", walk.walks_per_node)->capture_default_str();
  walk_cmd->add_option("--l", walk.length)->capture_default_str();
  walk_cmd->add_option("--out", corpus_out)->required();

  // embed
  std::string corpus_in, embedding_out;
  int64_t num_nodes = -1;
  SgnsParams sgns;
  auto* embed = app.add_subcommand("embed", "Train SGNS node embeddings");
  embed->add_option("--corpus", corpus_in)->required();
  embed->add_option("--n", num_nodes,
                    "Node count (default: max id in corpus + 1)");
  AddSgnsOptions(embed, sgns);
  embed->add_option("--out", embedding_out)->required();

  // cluster
  std::string embedding_in, pred_out;
  KMeansParams kmeans;
  auto* cluster = app.add_subcommand("cluster", "k-means on embeddings");
  cluster->add_option("--embeddings", embedding_in)->required();
  cluster->add_option("--k", kmeans.k)->capture_default_str();
  AddKMeansOptions(cluster, kmeans);
  cluster->add_option("--out", pred_out)->required();

  // score
  std::string truth_in, pred_in, mask_graph;
  auto* score = app.add_subcommand("score", "CCR and NMI of a labeling");
  score->add_option("--truth", truth_in)->required();
  score->add_option("--pred", pred_in)->required();
  score->add_option("--mask-isolated-in", mask_graph,
                    "Graph whose isolated nodes are excluded");

  // pipeline
  std::string pipe_graph, pipe_truth, pipe_out, pipe_policy = "begrudging";
  WalkParams pipe_walk;
  pipe_walk.walks_per_node = 20;
  pipe_walk.length = 10;
  SgnsParams pipe_sgns;
  KMeansParams pipe_kmeans;
  bool pipe_mask = false;
  auto* pipeline = app.add_subcommand("pipeline", "Walks -> SGNS -> k-means");
  pipeline->add_option("--graph", pipe_graph)->required();
  pipeline->add_option("--k", pipe_kmeans.k)->capture_default_str();
  pipeline->add_option("--truth", pipe_truth, "Ground-truth labels");
  pipeline->add_option("--policy", pipe_policy)->capture_default_str();
  pipeline->add_option("--r", pipe_walk.walks_per_node)->capture_default_str();
  pipeline->add_option("--l", pipe_walk.length)->capture_default_str();
  AddSgnsOptions(pipeline, pipe_sgns);
  AddKMeansOptions(pipeline, pipe_kmeans);
  pipeline->add_flag("--mask-isolated", pipe_mask);
  pipeline->add_option("--out", pipe_out, "Predicted labels output");

  // sweep
  std::string config_in, sweep_out;
  int trials = -1, workers = -1;
  bool no_timing = false, quiet = false;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
  sweep->add_option("--config", config_in, "JSON experiment config");
  sweep->add_option("--out", sweep_out, "Results CSV")->required();
  sweep->add_option("--trials", trials);
  sweep->add_option("--workers", workers);
  sweep->add_flag("--no-timing", no_timing,
                  "Write 0 for wall time (byte-reproducible output)");
  sweep->add_flag("--quiet", quiet);

  // spectral
  std::string spec_graph, spec_format = "json";
  bool require_regular = false, largest = false;
  int horizon = 3000;
  auto* spectral =
      app.add_subcommand("spectral", "Mixing-rate report for a graph");
  spectral->add_option("--graph", spec_graph)->required();
  spectral->add_flag("--require-regular", require_regular);
  spectral->add_flag("--largest-component", largest,
                     "Restrict to the largest connected component");
  spectral->add_option("--horizon", horizon)->capture_default_str();
  spectral->add_option("--format", spec_format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  // plot
  std::string plot_csv, plot_out, figure = "fig1", plot_x, plot_panel;
  auto* plot = app.add_subcommand("plot", "SVG chart of sweep results");
  plot->add_option("--csv", plot_csv)->required();
  plot->add_option("--out", plot_out)->required();
  plot->add_option("--figure", figure, "fig1 | fig2 | fig3 | fig4")
      ->capture_default_str();
  plot->add_option("--x", plot_x, "Override x column");
  plot->add_option("--panel", plot_panel,
                   "Override panel column ('none' for a single panel)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      sbm.seed = seed;
      SbmSample sample = GenerateSbm(sbm);
      WriteEdgeListFile(sample.graph, edges_out);
      WriteLabelsFile(sample.labels, labels_out);
      std::cerr << "generated n=" << sample.graph.num_nodes()
                << " m=" << sample.graph.num_edges() << '\n';
    } else if (*walk_cmd) {
      walk.policy = ParseWalkPolicy(policy_name);
      walk.seed = seed;
      WriteCorpusFile(BuildCorpus(ReadEdgeListFile(graph_in), walk),
                      corpus_out);
    } else if (*embed) {
      WalkCorpus corpus = ReadCorpusFile(corpus_in);
      const NodeId n = num_nodes >= 0 ? static_cast<NodeId>(num_nodes)
                                      : corpus.max_node() + 1;
      sgns.seed = seed;
      WriteEmbeddingFile(TrainSgns(corpus, n, sgns), embedding_out);
    } else if (*cluster) {
      kmeans.seed = seed;
      WriteLabelsFile(ClusterEmbedding(ReadEmbeddingFile(embedding_in), kmeans),
                      pred_out);
    } else if (*score) {
      LabelVector truth = ReadLabelsFile(truth_in);
      LabelVector pred = ReadLabelsFile(pred_in);
      std::vector<char> include;
      if (!mask_graph.empty()) {
        Graph g = ReadEdgeListFile(mask_graph);
        for (NodeId v = 0; v < g.num_nodes(); ++v) {
          include.push_back(g.degree_unchecked(v) > 0);
        }
      }
      PrintMetrics(Score(truth, pred, include));
    } else if (*pipeline) {
      Graph g = ReadEdgeListFile(pipe_graph);
      pipe_walk.policy = ParseWalkPolicy(pipe_policy);
      pipe_walk.seed = DeriveSeed(seed, {1});
      pipe_sgns.seed = DeriveSeed(seed, {2});
      pipe_kmeans.seed = DeriveSeed(seed, {3});
      LabelVector truth;
      if (!pipe_truth.empty()) truth = ReadLabelsFile(pipe_truth);
      PipelineResult result =
          RunPipeline(g, pipe_kmeans.k, pipe_walk, pipe_sgns, pipe_kmeans,
                      pipe_truth.empty() ? nullptr : &truth, pipe_mask);
      if (!pipe_out.empty()) WriteLabelsFile(result.labels, pipe_out);
      std::cerr << "walk " << result.times.walk_seconds << "s, embed "
                << result.times.embed_seconds << "s, cluster "
                << result.times.cluster_seconds << "s\n";
      if (result.metrics) PrintMetrics(*result.metrics);
    } else if (*sweep) {
      ExperimentConfig config = DefaultExperimentConfig();
      if (!config_in.empty()) {
        std::ifstream in(config_in);
        if (!in) throw FormatError("cannot open " + config_in);
        config = ParseExperimentConfig(nlohmann::json::parse(in));
      }
      if (app.count("--seed") > 0) config.seed = seed;
      if (trials > 0) config.trials = trials;
      if (workers > 0) config.workers = workers;
      if (no_timing) config.record_wall_time = false;
      SweepSummary summary =
          RunSweep(config, sweep_out, quiet ? nullptr : &std::cerr);
      std::cerr << "rows written " << summary.rows_written << ", skipped "
                << summary.rows_skipped << '\n';
    } else if (*spectral) {
      Graph g = ReadEdgeListFile(spec_graph);
      if (largest) {
        auto components = ConnectedComponents(g);
        auto best = std::max_element(
            components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });
        g = InducedSubgraph(g, *best);
      }
      MixingOptions options;
      options.horizon = horizon;
      options.eigen.seed = seed;
      nlohmann::json report = ReportJson(MixingRates(g, require_regular, options));
      report["nodes"] = g.num_nodes();
      report["edges"] = g.num_edges();
      if (spec_format == "json") {
        std::cout << report.dump(2) << '\n';
      } else {
        std::string header, values;
        for (const auto& item : report.items()) {
          header += (header.empty() ? "" : ",") + item.key();
          values += (values.empty() ? "" : ",") +
                    (item.value().is_string() ? item.value().get<std::string>()
                                              : item.value().dump());
        }
        std::cout << header << '\n' << values << '\n';
      }
    } else if (*plot) {
      PlotSpec spec = FigurePreset(figure);
      if (!plot_x.empty()) spec.x = plot_x;
      if (!plot_panel.empty()) spec.panel = plot_panel == "none" ? "" : plot_panel;
      EmitPlot(plot_csv, spec, plot_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
