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

#include "vecnbt/graph.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "vecnbt/random.h"

namespace vecnbt {

Graph Graph::FromEdges(NodeId num_nodes, std::span<const Edge> edges) {
  if (num_nodes < 0) throw std::invalid_argument("negative node count");
  Graph g;
  g.num_nodes_ = num_nodes;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes || e.v >= num_nodes) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) +
                                  ") references a node outside [0, " +
                                  std::to_string(num_nodes) + ")");
    }
    if (e.u == e.v) {
      throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    }
    g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end());
  if (dup != g.edges_.end()) {
    throw std::invalid_argument("duplicate edge (" + std::to_string(dup->u) +
                                ", " + std::to_string(dup->v) + ")");
  }

  g.offsets_.assign(num_nodes + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.neighbors_.resize(2 * g.edges_.size());
  g.out_edges_.resize(2 * g.edges_.size());
  std::vector<int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in edge order leaves the lists of
  // the smaller endpoint sorted; the larger endpoint's lists are sorted below.
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.edges_.size()); ++e) {
    const auto [u, v] = g.edges_[e];
    g.neighbors_[cursor[u]] = v;
    g.out_edges_[cursor[u]++] = 2 * e;
    g.neighbors_[cursor[v]] = u;
    g.out_edges_[cursor[v]++] = 2 * e + 1;
  }
  std::vector<std::pair<NodeId, EdgeId>> scratch;
  for (NodeId u = 0; u < num_nodes; ++u) {
    const int64_t b = g.offsets_[u], f = g.offsets_[u + 1];
    scratch.clear();
    for (int64_t i = b; i < f; ++i) {
      scratch.emplace_back(g.neighbors_[i], g.out_edges_[i]);
    }
    std::sort(scratch.begin(), scratch.end());
    for (int64_t i = b; i < f; ++i) {
      g.neighbors_[i] = scratch[i - b].first;
      g.out_edges_[i] = scratch[i - b].second;
    }
  }
  return g;
}

bool Graph::HasEdge(NodeId u, NodeId v) const {
  return DirectedEdgeId(u, v) >= 0;
}

EdgeId Graph::DirectedEdgeId(NodeId u, NodeId v) const {
  if (u < 0 || u >= num_nodes_) return -1;
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return -1;
  return out_edges(u)[it - nbrs.begin()];
}

std::pair<NodeId, NodeId> Graph::DirectedEdgeEndpoints(EdgeId id) const {
  if (id < 0 || id >= num_directed_edges()) {
    throw std::out_of_range("directed edge id " + std::to_string(id));
  }
  const Edge& e = edges_[id / 2];
  return id % 2 == 0 ? std::pair{e.u, e.v} : std::pair{e.v, e.u};
}

int Graph::MinDegree() const {
  int best = num_nodes_ > 0 ? degree_unchecked(0) : 0;
  for (NodeId u = 1; u < num_nodes_; ++u) {
    best = std::min(best, degree_unchecked(u));
  }
  return best;
}

int Graph::MaxDegree() const {
  int best = 0;
  for (NodeId u = 0; u < num_nodes_; ++u) {
    best = std::max(best, degree_unchecked(u));
  }
  return best;
}

int Degree(const Graph& g, NodeId u) {
  if (u < 0 || u >= g.num_nodes()) {
    throw std::out_of_range("node " + std::to_string(u) +
                            " out of range for graph with " +
                            std::to_string(g.num_nodes()) + " nodes");
  }
  return g.degree_unchecked(u);
}

int64_t Volume(const Graph& g) { return 2 * g.num_edges(); }

std::vector<std::vector<NodeId>> ConnectedComponents(const Graph& g) {
  std::vector<std::vector<NodeId>> components;
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < g.num_nodes(); ++root) {
    if (seen[root]) continue;
    std::vector<NodeId> component;
    seen[root] = 1;
    stack.push_back(root);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      component.push_back(u);
      for (NodeId v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

Graph InducedSubgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> local(g.num_nodes(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    Degree(g, nodes[i]);  // range check
    if (local[nodes[i]] != -1) {
      throw std::invalid_argument("node " + std::to_string(nodes[i]) +
                                  " listed twice");
    }
    local[nodes[i]] = static_cast<NodeId>(i);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] >= 0 && local[e.v] >= 0) {
      edges.push_back({local[e.u], local[e.v]});
    }
  }
  return Graph::FromEdges(static_cast<NodeId>(nodes.size()), edges);
}

int RegularDegree(const Graph& g) {
  if (g.num_nodes() == 0) return -1;
  int d = g.MinDegree();
  return d == g.MaxDegree() ? d : -1;
}

namespace {

// Appends every pair of the index space [0, total) that survives an
// independent Bernoulli(p) draw, skipping geometrically between successes.
template <typename EmitPair>
void SampleBernoulliPairs(int64_t total, double p, Rng& rng, EmitPair emit) {
  if (p <= 0.0 || total <= 0) return;
  if (p >= 1.0) {
    for (int64_t i = 0; i < total; ++i) emit(i);
    return;
  }
  std::geometric_distribution<int64_t> skip(p);
  for (int64_t i = skip(rng); i < total; i += 1 + skip(rng)) emit(i);
}

}  // namespace

SbmSample GenerateSbm(const SbmParams& params) {
  if (params.n < 1) throw std::invalid_argument("SBM needs n >= 1");
  if (params.k < 1) throw std::invalid_argument("SBM needs k >= 1");
  if (!(params.c > 0.0)) throw std::invalid_argument("SBM needs c > 0");
  if (!(params.lambda >= 0.0 && params.lambda <= 1.0)) {
    throw std::invalid_argument("SBM lambda must lie in [0, 1]");
  }
  const double a = params.intra_probability();
  const double b = params.inter_probability();
  if (a > 1.0 || b > 1.0) {
    throw std::invalid_argument("SBM edge probability c/n = " +
                                std::to_string(a) + " exceeds 1");
  }

  Rng rng(params.seed);
  SbmSample sample;
  sample.labels.resize(params.n);
  std::uniform_int_distribution<int32_t> pick_cluster(0, params.k - 1);
  for (auto& label : sample.labels) label = pick_cluster(rng);

  std::vector<std::vector<NodeId>> blocks(params.k);
  for (NodeId u = 0; u < params.n; ++u) blocks[sample.labels[u]].push_back(u);

  std::vector<Edge> edges;
  for (int s = 0; s < params.k; ++s) {
    const auto& bs = blocks[s];
    const int64_t size = static_cast<int64_t>(bs.size());
    // Row-major walk over pairs (i, j), i < j; indices arrive increasing.
    int64_t row = 0, row_start = 0;
    SampleBernoulliPairs(size * (size - 1) / 2, a, rng, [&](int64_t idx) {
      while (idx >= row_start + (size - 1 - row)) {
        row_start += size - 1 - row;
        ++row;
      }
      edges.push_back({bs[row], bs[row + 1 + (idx - row_start)]});
    });
    for (int t = s + 1; t < params.k; ++t) {
      const auto& bt = blocks[t];
      const int64_t cols = static_cast<int64_t>(bt.size());
      SampleBernoulliPairs(size * cols, b, rng, [&](int64_t idx) {
        edges.push_back({bs[idx / cols], bt[idx % cols]});
      });
    }
  }
  sample.graph = Graph::FromEdges(params.n, edges);
  return sample;
}

Graph RandomRegularGraph(NodeId n, int d, uint64_t seed) {
  if (d < 0 || n < 1 || d >= n || (static_cast<int64_t>(n) * d) % 2 != 0) {
    throw std::invalid_argument("no simple " + std::to_string(d) +
                                "-regular graph on " + std::to_string(n) +
                                " nodes");
  }
  Rng rng(seed);
  const int64_t points = static_cast<int64_t>(n) * d;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<NodeId> open(points);
    for (int64_t i = 0; i < points; ++i) open[i] = static_cast<NodeId>(i / d);
    std::vector<std::vector<NodeId>> adj(n);
    std::vector<Edge> edges;
    bool stuck = false;
    while (!open.empty() && !stuck) {
      stuck = true;
      for (int tries = 0; tries < 100; ++tries) {
        std::uniform_int_distribution<size_t> pick(0, open.size() - 1);
        size_t i = pick(rng), j = pick(rng);
        NodeId u = open[i], v = open[j];
        if (i == j || u == v ||
            std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end()) {
          continue;
        }
        adj[u].push_back(v);
        adj[v].push_back(u);
        edges.push_back({u, v});
        if (i < j) std::swap(i, j);
        open[i] = open.back();
        open.pop_back();
        open[j] = open.back();
        open.pop_back();
        stuck = false;
        break;
      }
    }
    if (!stuck) return Graph::FromEdges(n, edges);
  }
  throw std::runtime_error("random regular pairing did not complete");
}

}  // namespace vecnbt
