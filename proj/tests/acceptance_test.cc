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


// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vecnbt/embed.h"
#include "vecnbt/graph.h"
#include "vecnbt/metrics.h"
#include "vecnbt/pipeline.h"
#include "vecnbt/random.h"
#include "vecnbt/spectral.h"
#include "vecnbt/walks.h"

namespace vecnbt {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int failures = 0;

void Report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Graph LargestComponent(const Graph& g) {
  auto comps = ConnectedComponents(g);
  auto it = std::max_element(comps.begin(), comps.end(),
                             [](const auto& a, const auto& b) {
                               return a.size() < b.size();
                             });
  return InducedSubgraph(g, *it);
}

// Repeatedly strips nodes of degree < 2; the result may be empty.
Graph TwoCore(const Graph& g) {
  std::vector<int> degree(g.num_nodes());
  std::vector<char> removed(g.num_nodes(), 0);
  std::vector<NodeId> stack;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    degree[v] = Degree(g, v);
    if (degree[v] < 2) stack.push_back(v), removed[v] = 1;
  }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : g.neighbors(v)) {
      if (!removed[u] && --degree[u] < 2) stack.push_back(u), removed[u] = 1;
    }
  }
  std::vector<NodeId> keep;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!removed[v]) keep.push_back(v);
  }
  return InducedSubgraph(g, keep);
}

SbmSample RandomSbm(std::mt19937_64& rng, NodeId max_n) {
  SbmParams p;
  p.n = 20 + static_cast<NodeId>(rng() % (max_n - 19));
  p.k = 1 + static_cast<int>(rng() % 4);
  p.c = 1.0 + std::uniform_real_distribution<double>(0, 9)(rng);
  p.lambda = std::uniform_real_distribution<double>(0, 1)(rng);
  p.seed = rng();
  return GenerateSbm(p);
}

// 1. P row-stochastic, P-hat doubly stochastic, P-tilde = P-hat.
void StochasticitySuite() {
  std::mt19937_64 rng(101);
  double worst_p = 0, worst_hat = 0, worst_tilde = 0, worst_diff = 0;
  int hat_graphs = 0, tilde_graphs = 0;
  bool ok = true;
  for (int i = 0; i < 100; ++i) {
    SbmSample s = RandomSbm(rng, 500);
    VertexTransitionMatrix p = BuildVertexTransition(s.graph);
    StochasticityCheck pc = CheckRowStochastic(p.matrix, p.zero_rows);
    ok &= pc.ok;
    worst_p = std::max(worst_p, pc.max_row_deviation);

    Graph giant = LargestComponent(s.graph);
    if (giant.num_edges() >= 2) {  // connected, some node of degree > 1
      StochasticityCheck hc = CheckDoublyStochastic(
          BuildEdgeTransition(giant, EdgeWalkMode::kBegrudging).matrix);
      ok &= hc.ok;
      worst_hat = std::max(worst_hat, hc.max_deviation());
      ++hat_graphs;
    }
    Graph core = TwoCore(s.graph);
    if (core.num_edges() > 0) {
      SparseMatrix hat =
          BuildEdgeTransition(core, EdgeWalkMode::kBegrudging).matrix;
      SparseMatrix tilde =
          BuildEdgeTransition(core, EdgeWalkMode::kNonBacktracking).matrix;
      const double diff = (Eigen::MatrixXd(hat) - Eigen::MatrixXd(tilde))
                              .cwiseAbs()
                              .maxCoeff();
      StochasticityCheck tc = CheckDoublyStochastic(tilde);
      ok &= diff == 0.0 && tc.ok;
      worst_diff = std::max(worst_diff, diff);
      worst_tilde = std::max(worst_tilde, tc.max_deviation());
      ++tilde_graphs;
    }
  }
  ok &= hat_graphs >= 90 && tilde_graphs >= 50;
  Report(1, ok,
         Fmt("100 SBM graphs: max |row sum - 1| of P %.1e; P-hat on %d giant "
             "components max dev %.1e; P-tilde vs P-hat on %d 2-cores max "
             "|diff| %.1e (P-tilde dev %.1e); tol 1e-12",
             worst_p, hat_graphs, worst_hat, tilde_graphs, worst_diff,
             worst_tilde));
}

// 2. Stationary distributions and the begrudging walk's edge frequencies.
void StationaritySuite() {
  std::mt19937_64 rng(202);
  double worst_pi = 0, worst_hat = 0;
  bool ok = true;
  int graphs = 0;
  while (graphs < 20) {
    Graph g = LargestComponent(RandomSbm(rng, 500).graph);
    if (g.num_edges() < 2) continue;
    ++graphs;
    std::vector<double> pi(g.num_nodes());
    const double vol = static_cast<double>(Volume(g));
    for (NodeId v = 0; v < g.num_nodes(); ++v) pi[v] = Degree(g, v) / vol;
    worst_pi = std::max(
        worst_pi, StationaryResidual(BuildVertexTransition(g).matrix, pi));
    std::vector<double> flat(g.num_directed_edges(), 1.0 / vol);
    worst_hat = std::max(
        worst_hat,
        StationaryResidual(
            BuildEdgeTransition(g, EdgeWalkMode::kBegrudging).matrix, flat));
  }
  ok &= worst_pi < 1e-10 && worst_hat < 1e-10;

  // 10^6 begrudging steps on a sparse graph with pendant nodes. Consecutive
  // steps are correlated, so each edge's standard error comes from batch
  // means; every edge frequency must lie within 3 of them of 1/(2m).
  Graph g = LargestComponent(
      GenerateSbm({.n = 120, .k = 2, .c = 3.5, .lambda = 0.5, .seed = 9})
          .graph);
  int pendant = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) pendant += Degree(g, v) == 1;
  const int kBatches = 1000, kBatchLen = 1000;
  Rng walk_rng(DeriveSeed(2, {0}));
  const Sentence walk =
      Walk(g, 0, kBatches * kBatchLen, WalkPolicy::kBegrudging, walk_rng);
  const int64_t edges = g.num_directed_edges();
  std::vector<double> sum(edges, 0), sum_sq(edges, 0), batch(edges, 0);
  for (int b = 0; b < kBatches; ++b) {
    std::fill(batch.begin(), batch.end(), 0.0);
    for (int i = 0; i < kBatchLen; ++i) {
      const size_t step = static_cast<size_t>(b) * kBatchLen + i;
      batch[g.DirectedEdgeId(walk[step], walk[step + 1])] += 1.0 / kBatchLen;
    }
    for (int64_t e = 0; e < edges; ++e) {
      sum[e] += batch[e];
      sum_sq[e] += batch[e] * batch[e];
    }
  }
  double max_z = 0, mean_z2 = 0;
  const double expected = 1.0 / static_cast<double>(edges);
  for (int64_t e = 0; e < edges; ++e) {
    const double mean = sum[e] / kBatches;
    const double var = (sum_sq[e] - kBatches * mean * mean) / (kBatches - 1);
    const double z = (mean - expected) / std::sqrt(var / kBatches);
    max_z = std::max(max_z, std::abs(z));
    mean_z2 += z * z / static_cast<double>(edges);
  }
  ok &= max_z <= 3.0;
  Report(2, ok,
         Fmt("20 giant components: max |pi P - pi|_1 %.1e, max |pi^ P^ - "
             "pi^|_1 %.1e (tol 1e-10); 1e6 begrudging steps on %lld directed "
             "edges (%d pendant nodes): max |freq - 1/2m| = %.2f sigma (tol "
             "3), mean z^2 %.2f",
             worst_pi, worst_hat, static_cast<long long>(edges), pendant, max_z,
             mean_z2));
}

// Two random d-regular graphs on n/2 nodes joined by one edge swap: still
// d-regular and connected, with lambda2 close to d.
Graph TwoCommunityRegular(NodeId n, int d, uint64_t seed) {
  const NodeId half = n / 2;
  std::vector<Edge> edges;
  for (int side = 0; side < 2; ++side) {
    Graph g = RandomRegularGraph(half, d, DeriveSeed(seed, {static_cast<uint64_t>(side)}));
    for (const Edge& e : g.edges()) {
      edges.push_back({e.u + side * half, e.v + side * half});
    }
  }
  const Edge a = edges.front(), b = edges.back();
  edges.erase(edges.end() - 1);
  edges.erase(edges.begin());
  edges.push_back({a.u, b.u});
  edges.push_back({a.v, b.v});
  return Graph::FromEdges(2 * half, edges);
}

// 3. Analytic mixing rates on random regular graphs.
void MixingSuite() {
  struct Case {
    Graph g;
    int d;
    bool planted;
  };
  std::vector<Case> cases;
  const int degrees[] = {3, 4, 5};
  const NodeId sizes[] = {20, 50, 100, 200};
  for (int i = 0; i < 20; ++i) {
    const int d = degrees[i % 3];
    const NodeId n = sizes[i % 4];
    uint64_t seed = 300 + i;
    Graph g = RandomRegularGraph(n, d, seed);
    while (!CheckErgodicity(BuildVertexTransition(g).matrix).ergodic()) {
      g = RandomRegularGraph(n, d, ++seed);
    }
    cases.push_back({std::move(g), d, false});
  }
  // Uniform random regular graphs rarely have lambda2 above 2 sqrt(d - 1),
  // so the ratio bound is also exercised on two-community regular graphs.
  for (int i = 0; i < 6; ++i) {
    const int d = degrees[i % 3];
    cases.push_back({TwoCommunityRegular(i < 3 ? 60 : 120, d, 350 + i), d,
                     true});
  }

  double worst_modulus = 0, worst_signed = 0, worst_planted = 0;
  int above = 0;
  bool ratio_ok = true, ergodic = true;
  double ratio_min = 2, ratio_max = -1;
  for (const Case& c : cases) {
    SparseMatrix p = BuildVertexTransition(c.g).matrix;
    ergodic &= CheckErgodicity(p).ergodic();
    MixingReport r = MixingRates(c.g, true);
    MixingCurve curve = MeasureMixingEmpirical(p, 20000);
    const double err = std::abs(curve.fitted_rate - r.rho_modulus);
    if (c.planted) {
      worst_planted = std::max(worst_planted, err);
    } else {
      worst_modulus = std::max(worst_modulus, err);
      worst_signed =
          std::max(worst_signed, std::abs(curve.fitted_rate - r.rho));
    }
    if (r.lambda2 >= 2 * std::sqrt(c.d - 1.0)) {
      ++above;
      const double lower = c.d / (2.0 * (c.d - 1)) - 0.02;
      ratio_ok &= r.ratio >= lower && r.ratio <= 1.02;
      ratio_min = std::min(ratio_min, r.ratio - c.d / (2.0 * (c.d - 1)));
      ratio_max = std::max(ratio_max, r.ratio);
    }
  }
  const bool ok = ergodic && worst_modulus <= 0.03 && worst_planted <= 0.03 &&
                  ratio_ok && above >= 6;
  Report(3, ok,
         Fmt("20 random regular graphs (d=3,4,5; n<=200): max |empirical rate "
             "- max(|l2|,|l_min|)/d| %.4f (tol 0.03; the signed l2/d reading "
             "differs by up to %.4f because l_min dominates); 6 two-community "
             "regular graphs: max gap %.4f; %d graphs with l2 >= 2 sqrt(d-1): "
             "ratio - d/(2(d-1)) >= %.4f, ratio <= %.4f (tol +-0.02)",
             worst_modulus, worst_signed, worst_planted, above, ratio_min,
             ratio_max));
}

// 4. CCR assignment vs exhaustive search; NMI examples and invariances.
void MetricsSuite() {
  std::mt19937_64 rng(404);
  int mismatches = 0, pairs = 0;
  for (int k = 1; k <= 6; ++k) {
    for (int t = 0; t < 1000; ++t, ++pairs) {
      const int n = 1 + static_cast<int>(rng() % 50);
      std::vector<int32_t> x(n), y(n);
      for (int i = 0; i < n; ++i) {
        x[i] = static_cast<int32_t>(rng() % k);
        y[i] = static_cast<int32_t>(rng() % k);
      }
      x.push_back(k - 1);
      y.push_back(k - 1);
      std::vector<int32_t> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      int64_t best = 0;
      do {
        int64_t hits = 0;
        for (size_t i = 0; i < x.size(); ++i) hits += perm[y[i]] == x[i];
        best = std::max(best, hits);
      } while (std::next_permutation(perm.begin(), perm.end()));
      mismatches += Ccr(x, y).rate != static_cast<double>(best) / x.size();
    }
  }
  using L = std::vector<int32_t>;
  const double e1 = Nmi(L{0, 0, 1, 1, 2}, L{1, 1, 2, 2, 0});
  const double e2 = Nmi(L{0, 0, 1, 1}, L{0, 1, 0, 1});
  const double e3 = Nmi(L{0, 0, 1, 1}, L{0, 0, 0, 1});
  bool nmi_ok = std::abs(e1 - 1) < 1e-3 && std::abs(e2) < 1e-3 &&
                std::abs(e3 - 0.3456) < 1e-3;
  double worst_sym = 0, worst_relabel = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + static_cast<int>(rng() % 50);
    const int k = 1 + static_cast<int>(rng() % 6);
    L x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = static_cast<int32_t>(rng() % k);
      y[i] = static_cast<int32_t>(rng() % k);
    }
    L perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    L y2 = y;
    for (int32_t& v : y2) v = perm[v];
    worst_sym = std::max(worst_sym, std::abs(Nmi(x, y) - Nmi(y, x)));
    worst_relabel = std::max(worst_relabel, std::abs(Nmi(x, y) - Nmi(x, y2)));
  }
  nmi_ok &= worst_sym <= 1e-12 && worst_relabel <= 1e-12;
  Report(4, mismatches == 0 && nmi_ok,
         Fmt("CCR vs exhaustive K! search: %d/%d mismatches (K=1..6); NMI "
             "examples %.4f, %.4f, %.4f (want 1, 0, 0.3456 +-1e-3); max "
             "symmetry gap %.1e, relabel gap %.1e",
             mismatches, pairs, e1, e2, e3, worst_sym, worst_relabel));
}

// 5. SGNS gradient vs central finite differences.
void GradientSuite() {
  const int d = 10, negatives = 5;
  std::mt19937_64 rng(505);
  std::normal_distribution<double> normal(0.0, 0.5);
  double worst = 0;
  for (int point = 0; point < 10; ++point) {
    std::vector<double> u(d), v(d), neg(d * negatives);
    for (double& x : u) x = normal(rng);
    for (double& x : v) x = normal(rng);
    for (double& x : neg) x = normal(rng);
    const SgnsGradient g = SgnsObjectiveGradient(u, v, neg);
    auto check = [&](std::vector<double>& param,
                     const std::vector<double>& analytic) {
      for (size_t i = 0; i < param.size(); ++i) {
        const double saved = param[i], h = 1e-5;
        param[i] = saved + h;
        const double up = SgnsObjective(u, v, neg);
        param[i] = saved - h;
        const double down = SgnsObjective(u, v, neg);
        param[i] = saved;
        const double numeric = (up - down) / (2 * h);
        worst = std::max(worst, std::abs(numeric - analytic[i]) /
                                    std::max(1e-3, std::abs(numeric)));
      }
    };
    check(u, g.center);
    check(v, g.context);
    check(neg, g.negatives);
  }
  Report(5, worst < 1e-5,
         Fmt("10 random points, d=%d, %d negatives: max relative error %.2e "
             "(tol 1e-5)",
             d, negatives, worst));
}

fs::path ScratchDir() {
  fs::path dir = fs::temp_directory_path() / "vecnbt_acceptance";
  fs::create_directories(dir);
  return dir;
}

std::vector<ResultRow> Sweep(const ExperimentConfig& config,
                             const std::string& name) {
  fs::path out = ScratchDir() / name;
  fs::remove(out);
  RunSweep(config, out);
  return ReadResultRowsFile(out);
}

ExperimentConfig PaperArms(std::vector<double> c_values) {
  ExperimentConfig config = DefaultExperimentConfig();
  config.n_values = {1000};
  config.k_values = {2};
  config.lambda_values = {0.9};
  config.c_values = std::move(c_values);
  config.trials = 10;
  config.seed = 1;
  config.workers = 1;
  return config;
}

// 6. Figure 1 at desk scale.
void FigureOneSuite() {
  const auto start = Clock::now();
  const std::vector<ResultRow> dense = Sweep(PaperArms({10, 20}), "fig1_a.csv");
  const std::vector<ResultRow> sparse =
      Sweep(PaperArms({3, 4, 5}), "fig1_b.csv");
  std::map<std::string, double> arm_seconds;
  for (const auto* rows : {&dense, &sparse}) {
    for (const ResultRow& r : *rows) arm_seconds[r.arm] += r.wall_time_seconds;
  }

  bool ok = true;
  std::string detail = "(a)";
  for (double c : {10.0, 20.0}) {
    for (const char* arm : {"BT", "NBT"}) {
      int good = 0, total = 0;
      for (const ResultRow& r : dense) {
        if (r.c == c && r.arm == arm) total++, good += r.nmi > 0.8;
      }
      ok &= total == 10 && good >= 8;
      detail += Fmt(" c=%g %s %d/10 NMI>0.8;", c, arm, good);
    }
  }
  detail += " (b)";
  for (double c : {3.0, 4.0, 5.0}) {
    double bt = 0, nbt = 0;
    for (const ResultRow& r : sparse) {
      if (r.c != c) continue;
      (r.arm == "BT" ? bt : nbt) += r.nmi / 10;
    }
    ok &= nbt > bt;
    detail += Fmt(" c=%g mean NMI NBT %.3f vs BT %.3f;", c, nbt, bt);
  }
  detail += Fmt(" wall time BT %.0fs, NBT %.0fs (total %.0fs)",
                arm_seconds["BT"], arm_seconds["NBT"], Seconds(start));
  Report(6, ok, detail);
}

// 7. NBT advantage shrinks as walks get longer.
void WalkLengthSuite() {
  ExperimentConfig config = PaperArms({4, 5, 6});
  config.arms[0].lengths = {5, 20};
  config.arms[1].lengths = {5, 20};
  const std::vector<ResultRow> rows = Sweep(config, "fig3.csv");
  std::map<int, double> gap;
  std::string detail;
  for (int l : {5, 20}) {
    for (double c : config.c_values) {
      double bt = 0, nbt = 0;
      for (const ResultRow& r : rows) {
        if (r.l != l || r.c != c) continue;
        (r.arm == "BT" ? bt : nbt) += r.nmi / config.trials;
      }
      gap[l] += (nbt - bt) / config.c_values.size();
      detail += Fmt(" l=%d c=%g gap %+.3f;", l, c, nbt - bt);
    }
  }
  Report(7, gap[5] >= gap[20],
         Fmt("mean NBT-BT NMI gap over c in {4,5,6}, 10 trials: l=5 %+.4f, "
             "l=20 %+.4f;",
             gap[5], gap[20]) +
             detail);
}

// 8. Byte-identical sweeps.
void DeterminismSuite() {
  ExperimentConfig config = PaperArms({4, 8});
  config.n_values = {400};
  config.trials = 2;
  config.record_wall_time = false;
  fs::path a = ScratchDir() / "det_a.csv", b = ScratchDir() / "det_b.csv";
  fs::remove(a);
  fs::remove(b);
  RunSweep(config, a);
  RunSweep(config, b);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string x = slurp(a), y = slurp(b);
  const auto lines = std::count(x.begin(), x.end(), '\n');
  Report(8, !x.empty() && x == y,
         Fmt("two sweeps (n=400, c in {4,8}, 2 trials, both arms, "
             "single-threaded): %lld lines, %zu bytes, identical=%s",
             static_cast<long long>(lines), x.size(),
             x == y ? "yes" : "no"));
}

}  // namespace
}  // namespace vecnbt

// With arguments, runs only the listed criteria (e.g. "acceptance_test 3 7").
int main(int argc, char** argv) {
  using namespace vecnbt;
  void (*const suites[])() = {
      StochasticitySuite, StationaritySuite, MixingSuite, MetricsSuite,
      GradientSuite,      FigureOneSuite,    WalkLengthSuite, DeterminismSuite};
  std::vector<bool> run(8, argc == 1);
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > 8) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    run[c - 1] = true;
  }
  int ran = 0;
  for (int c = 0; c < 8; ++c) {
    if (run[c]) {
      suites[c]();
      ++ran;
    }
  }
  std::printf("acceptance: %d of %d criteria failed\n", failures, ran);
  return failures == 0 ? 0 : 1;
}
