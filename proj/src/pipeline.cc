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

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vecnbt/io.h"
#include "vecnbt/random.h"

namespace vecnbt {

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PipelineResult RunPipeline(const Graph& g, int k, const WalkParams& walk,
                           const SgnsParams& embed, const KMeansParams& cluster,
                           const LabelVector* truth, bool mask_isolated) {
  if (truth != nullptr &&
      static_cast<NodeId>(truth->size()) != g.num_nodes()) {
    throw std::invalid_argument("ground truth has " +
                                std::to_string(truth->size()) +
                                " labels for a graph with " +
                                std::to_string(g.num_nodes()) + " nodes");
  }
  PipelineResult result;

  auto start = Clock::now();
  const WalkCorpus corpus = BuildCorpus(g, walk);
  result.times.walk_seconds = SecondsSince(start);
  result.corpus_sentences = static_cast<int64_t>(corpus.sentences.size());

  start = Clock::now();
  const EmbeddingMatrix embedding = TrainSgns(corpus, g.num_nodes(), embed);
  result.times.embed_seconds = SecondsSince(start);

  start = Clock::now();
  KMeansParams km = cluster;
  km.k = k;
  result.labels = ClusterEmbedding(embedding, km);
  result.times.cluster_seconds = SecondsSince(start);

  if (truth != nullptr) {
    std::vector<char> include;
    if (mask_isolated) {
      include.resize(g.num_nodes());
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        include[v] = g.degree_unchecked(v) > 0;
      }
    }
    result.metrics = Score(*truth, result.labels, include);
  }
  return result;
}

void ExperimentConfig::Validate() const {
  if (n_values.empty() || k_values.empty() || c_values.empty() ||
      lambda_values.empty()) {
    throw std::invalid_argument("sweep lists must be non-empty");
  }
  if (arms.empty()) throw std::invalid_argument("at least one arm required");
  std::set<std::string> names;
  for (const ArmConfig& arm : arms) {
    if (arm.name.empty() || arm.name.find(',') != std::string::npos) {
      throw std::invalid_argument("arm names must be non-empty without commas");
    }
    if (!names.insert(arm.name).second) {
      throw std::invalid_argument("duplicate arm name " + arm.name);
    }
    if (arm.walks_per_node < 1 || arm.window < 1 || arm.lengths.empty()) {
      throw std::invalid_argument("arm " + arm.name +
                                  " needs r >= 1, w >= 1 and lengths");
    }
    for (int l : arm.lengths) {
      if (l < 1) throw std::invalid_argument("walk lengths must be >= 1");
    }
  }
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  for (int k : k_values) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
  }
  for (int n : n_values) {
    for (double c : c_values) {
      if (n < 1 || !(c > 0) || c / n > 1.0) {
        throw std::invalid_argument("invalid (n, c) = (" + std::to_string(n) +
                                    ", " + std::to_string(c) + ")");
      }
    }
  }
  for (double lambda : lambda_values) {
    if (!(lambda >= 0 && lambda <= 1)) {
      throw std::invalid_argument("lambda must lie in [0, 1]");
    }
  }
  SgnsParams e = embed;
  e.Validate();
  KMeansParams km = cluster;
  km.Validate();
}

ExperimentConfig DefaultExperimentConfig() {
  ExperimentConfig config;
  config.arms = {
      {"BT", WalkPolicy::kSimple, 10, {60}, 8},
      {"NBT", WalkPolicy::kBegrudging, 20, {10}, 5},
  };
  config.embed.dim = 50;
  return config;
}

namespace {

using nlohmann::json;

void CheckKeys(const json& j, const std::set<std::string>& allowed,
               const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " +
                                  where);
    }
  }
}

template <typename T>
void ReadIf(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const nlohmann::json& j) {
  ExperimentConfig config = DefaultExperimentConfig();
  try {
    CheckKeys(j,
              {"sbm", "arms", "embed", "cluster", "trials", "seed",
               "mask_isolated", "workers", "record_wall_time"},
              "config");
    if (j.contains("sbm")) {
      const json& s = j.at("sbm");
      CheckKeys(s, {"n", "k", "c", "lambda"}, "sbm");
      ReadIf(s, "n", config.n_values);
      ReadIf(s, "k", config.k_values);
      ReadIf(s, "c", config.c_values);
      ReadIf(s, "lambda", config.lambda_values);
    }
    if (j.contains("arms")) {
      config.arms.clear();
      for (const json& a : j.at("arms")) {
        CheckKeys(a, {"name", "policy", "r", "l", "w"}, "arm");
        ArmConfig arm;
        arm.name = a.at("name").get<std::string>();
        arm.policy = ParseWalkPolicy(a.at("policy").get<std::string>());
        ReadIf(a, "r", arm.walks_per_node);
        ReadIf(a, "w", arm.window);
        if (a.contains("l")) {
          const json& l = a.at("l");
          arm.lengths = l.is_array() ? l.get<std::vector<int>>()
                                     : std::vector<int>{l.get<int>()};
        }
        config.arms.push_back(std::move(arm));
      }
    }
    if (j.contains("embed")) {
      const json& e = j.at("embed");
      CheckKeys(e,
                {"dim", "negatives", "epochs", "lr_initial", "lr_final",
                 "threads"},
                "embed");
      ReadIf(e, "dim", config.embed.dim);
      ReadIf(e, "negatives", config.embed.negatives);
      ReadIf(e, "epochs", config.embed.epochs);
      ReadIf(e, "lr_initial", config.embed.lr_initial);
      ReadIf(e, "lr_final", config.embed.lr_final);
      ReadIf(e, "threads", config.embed.num_threads);
    }
    if (j.contains("cluster")) {
      const json& c = j.at("cluster");
      CheckKeys(c, {"restarts", "max_iters", "tol"}, "cluster");
      ReadIf(c, "restarts", config.cluster.restarts);
      ReadIf(c, "max_iters", config.cluster.max_iters);
      ReadIf(c, "tol", config.cluster.tol);
    }
    ReadIf(j, "trials", config.trials);
    ReadIf(j, "seed", config.seed);
    ReadIf(j, "mask_isolated", config.mask_isolated);
    ReadIf(j, "workers", config.workers);
    ReadIf(j, "record_wall_time", config.record_wall_time);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  config.Validate();
  return config;
}

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config) {
  json arms = json::array();
  for (const ArmConfig& a : config.arms) {
    arms.push_back({{"name", a.name},
                    {"policy", std::string(WalkPolicyName(a.policy))},
                    {"r", a.walks_per_node},
                    {"l", a.lengths},
                    {"w", a.window}});
  }
  return {
      {"sbm",
       {{"n", config.n_values},
        {"k", config.k_values},
        {"c", config.c_values},
        {"lambda", config.lambda_values}}},
      {"arms", arms},
      {"embed",
       {{"dim", config.embed.dim},
        {"negatives", config.embed.negatives},
        {"epochs", config.embed.epochs},
        {"lr_initial", config.embed.lr_initial},
        {"lr_final", config.embed.lr_final},
        {"threads", config.embed.num_threads}}},
      {"cluster",
       {{"restarts", config.cluster.restarts},
        {"max_iters", config.cluster.max_iters},
        {"tol", config.cluster.tol}}},
      {"trials", config.trials},
      {"seed", config.seed},
      {"mask_isolated", config.mask_isolated},
      {"workers", config.workers},
      {"record_wall_time", config.record_wall_time},
  };
}

const std::string& ResultCsvHeader() {
  static const std::string header =
      "arm,n,k,c,lambda,l,r,w,trial,ccr,nmi,wall_time_seconds";
  return header;
}

std::string ResultRowKey(const ResultRow& row) {
  std::ostringstream out;
  out << row.arm << ',' << row.n << ',' << row.k << ',' << FormatDouble(row.c)
      << ',' << FormatDouble(row.lambda) << ',' << row.l << ',' << row.r << ','
      << row.w << ',' << row.trial;
  return out.str();
}

std::string FormatResultRow(const ResultRow& row) {
  return ResultRowKey(row) + ',' + FormatDouble(row.ccr) + ',' +
         FormatDouble(row.nmi) + ',' + FormatDouble(row.wall_time_seconds);
}

std::vector<ResultRow> ReadResultRows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != ResultCsvHeader()) {
    throw FormatError("unexpected results header '" + line + "'");
  }
  std::vector<ResultRow> rows;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) f.push_back(cell);
    if (f.size() != 12) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 12 "
                        "columns, found " + std::to_string(f.size()));
    }
    try {
      ResultRow row;
      row.arm = f[0];
      row.n = std::stoi(f[1]);
      row.k = std::stoi(f[2]);
      row.c = std::stod(f[3]);
      row.lambda = std::stod(f[4]);
      row.l = std::stoi(f[5]);
      row.r = std::stoi(f[6]);
      row.w = std::stoi(f[7]);
      row.trial = std::stoi(f[8]);
      row.ccr = std::stod(f[9]);
      row.nmi = std::stod(f[10]);
      row.wall_time_seconds = std::stod(f[11]);
      rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": malformed number");
    }
  }
  return rows;
}

std::vector<ResultRow> ReadResultRowsFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return ReadResultRows(in);
}

uint64_t CellGraphSeed(uint64_t master, int n, int k, double c, double lambda,
                       int trial) {
  return DeriveSeed(master, {static_cast<uint64_t>(n), static_cast<uint64_t>(k),
                             std::bit_cast<uint64_t>(c),
                             std::bit_cast<uint64_t>(lambda),
                             static_cast<uint64_t>(trial)});
}

namespace {

struct SweepTask {
  SbmParams sbm;
  int trial;
  std::vector<ResultRow> pending;  // rows still to compute, metrics unset
};

std::vector<std::string> RunTask(const ExperimentConfig& config,
                                 const SweepTask& task) {
  const SbmSample sample = GenerateSbm(task.sbm);
  std::vector<std::string> lines;
  for (ResultRow row : task.pending) {
    const ArmConfig& arm = *std::find_if(
        config.arms.begin(), config.arms.end(),
        [&](const ArmConfig& a) { return a.name == row.arm; });
    const uint64_t base = DeriveSeed(
        task.sbm.seed,
        {StableHash(arm.name), static_cast<uint64_t>(row.l)});
    WalkParams walk;
    walk.walks_per_node = arm.walks_per_node;
    walk.length = row.l;
    walk.policy = arm.policy;
    walk.seed = DeriveSeed(base, {1});
    SgnsParams embed = config.embed;
    embed.window = arm.window;
    embed.seed = DeriveSeed(base, {2});
    KMeansParams cluster = config.cluster;
    cluster.seed = DeriveSeed(base, {3});

    const PipelineResult result =
        RunPipeline(sample.graph, task.sbm.k, walk, embed, cluster,
                    &sample.labels, config.mask_isolated);
    row.ccr = result.metrics->ccr;
    row.nmi = result.metrics->nmi;
    row.wall_time_seconds =
        config.record_wall_time ? result.times.total() : 0.0;
    lines.push_back(FormatResultRow(row));
  }
  return lines;
}

}  // namespace

SweepSummary RunSweep(const ExperimentConfig& config,
                      const std::filesystem::path& output, std::ostream* log) {
  config.Validate();
  std::set<std::string> done;
  const bool resume =
      std::filesystem::exists(output) && std::filesystem::file_size(output) > 0;
  if (resume) {
    for (const ResultRow& row : ReadResultRowsFile(output)) {
      done.insert(ResultRowKey(row));
    }
  }

  SweepSummary summary;
  std::vector<SweepTask> tasks;
  for (int n : config.n_values) {
    for (int k : config.k_values) {
      for (double c : config.c_values) {
        for (double lambda : config.lambda_values) {
          for (int trial = 0; trial < config.trials; ++trial) {
            SweepTask task;
            task.sbm = {n, k, c, lambda,
                        CellGraphSeed(config.seed, n, k, c, lambda, trial)};
            task.trial = trial;
            for (const ArmConfig& arm : config.arms) {
              for (int l : arm.lengths) {
                ResultRow row{arm.name, n,         k,           c, lambda, l,
                              arm.walks_per_node, arm.window, trial};
                if (done.count(ResultRowKey(row))) {
                  ++summary.rows_skipped;
                } else {
                  task.pending.push_back(std::move(row));
                }
              }
            }
            if (!task.pending.empty()) tasks.push_back(std::move(task));
          }
        }
      }
    }
  }

  std::ofstream out(output, resume ? std::ios::app : std::ios::trunc);
  if (!out) throw FormatError("cannot open " + output.string());
  if (!resume) out << ResultCsvHeader() << '\n' << std::flush;

  // Results are committed strictly in task order so the file does not depend
  // on scheduling.
  std::mutex mu;
  std::vector<std::optional<std::vector<std::string>>> finished(tasks.size());
  size_t next_commit = 0;
  std::atomic<size_t> next_task{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const size_t i = next_task.fetch_add(1);
      if (i >= tasks.size()) return;
      std::vector<std::string> lines;
      try {
        lines = RunTask(config, tasks[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next_task = tasks.size();
        return;
      }
      std::lock_guard<std::mutex> lock(mu);
      finished[i] = std::move(lines);
      while (next_commit < tasks.size() && finished[next_commit]) {
        for (const std::string& line : *finished[next_commit]) {
          out << line << '\n';
          ++summary.rows_written;
        }
        out.flush();
        finished[next_commit].reset();
        if (log != nullptr) {
          const SweepTask& t = tasks[next_commit];
          *log << "[sweep] n=" << t.sbm.n << " k=" << t.sbm.k
               << " c=" << t.sbm.c << " lambda=" << t.sbm.lambda
               << " trial=" << t.trial << " (" << next_commit + 1 << "/"
               << tasks.size() << ")\n";
        }
        ++next_commit;
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    const int workers =
        static_cast<int>(std::min<size_t>(config.workers, tasks.size()));
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  if (!out) throw FormatError("write to " + output.string() + " failed");
  return summary;
}

}  // namespace vecnbt
