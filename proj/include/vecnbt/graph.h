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

#ifndef VECNBT_GRAPH_H_
#define VECNBT_GRAPH_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vecnbt {

using NodeId = int32_t;
using EdgeId = int64_t;

// Cluster id per node, values in [0, K).
using LabelVector = std::vector<int32_t>;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable undirected, unweighted simple graph in compressed adjacency form.
//
// Every undirected edge {u, v} with u < v has a rank e in the sorted edge
// list. Its two orientations are the directed edges 2e = (u, v) and
// 2e + 1 = (v, u), so the reverse of directed edge a is a ^ 1.
class Graph {
 public:
  Graph() = default;

  // Throws std::invalid_argument on self-loops, duplicate edges or ids
  // outside [0, num_nodes). Edge orientation in the input is irrelevant.
  static Graph FromEdges(NodeId num_nodes, std::span<const Edge> edges);

  NodeId num_nodes() const { return num_nodes_; }
  int64_t num_edges() const { return static_cast<int64_t>(edges_.size()); }
  int64_t num_directed_edges() const { return 2 * num_edges(); }

  // Sorted neighbor ids. Unchecked.
  std::span<const NodeId> neighbors(NodeId u) const {
    return {neighbors_.data() + offsets_[u],
            neighbors_.data() + offsets_[u + 1]};
  }
  // Directed-edge ids parallel to neighbors(u): slot i holds (u, neighbors(u)[i]).
  std::span<const EdgeId> out_edges(NodeId u) const {
    return {out_edges_.data() + offsets_[u],
            out_edges_.data() + offsets_[u + 1]};
  }
  int degree_unchecked(NodeId u) const {
    return static_cast<int>(offsets_[u + 1] - offsets_[u]);
  }

  // Undirected edges with u < v, sorted.
  const std::vector<Edge>& edges() const { return edges_; }

  bool HasEdge(NodeId u, NodeId v) const;
  // Returns -1 when (u, v) is not an edge.
  EdgeId DirectedEdgeId(NodeId u, NodeId v) const;
  std::pair<NodeId, NodeId> DirectedEdgeEndpoints(EdgeId id) const;

  int MinDegree() const;
  int MaxDegree() const;

 private:
  NodeId num_nodes_ = 0;
  std::vector<int64_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<EdgeId> out_edges_;
  std::vector<Edge> edges_;
};

// Throws std::out_of_range if u is not a node of g.
int Degree(const Graph& g, NodeId u);

// Sum of degrees, 2m.
int64_t Volume(const Graph& g);

// Maximal connected node sets, each sorted; components ordered by their
// smallest node id.
std::vector<std::vector<NodeId>> ConnectedComponents(const Graph& g);

// Subgraph induced by `nodes`; node nodes[i] becomes node i.
Graph InducedSubgraph(const Graph& g, std::span<const NodeId> nodes);

// Returns the regular degree, or -1 if degrees differ (or the graph is empty).
int RegularDegree(const Graph& g);

// Planted-partition stochastic block model G(n, k, c, lambda): every node
// joins one of k clusters uniformly at random, then each unordered pair is
// joined independently with probability c/n (same cluster) or
// c(1 - lambda)/n (different clusters).
struct SbmParams {
  NodeId n = 1000;
  int k = 2;
  double c = 10.0;
  double lambda = 0.9;
  uint64_t seed = 1;

  double intra_probability() const { return c / n; }
  double inter_probability() const { return c * (1.0 - lambda) / n; }
};

struct SbmSample {
  Graph graph;
  LabelVector labels;
};

// Throws std::invalid_argument when a parameter is out of range or an edge
// probability exceeds 1. Deterministic in params.seed.
SbmSample GenerateSbm(const SbmParams& params);

// Uniform-ish simple d-regular graph on n nodes by sequential random pairing
// with restarts. Requires n * d even and d < n.
Graph RandomRegularGraph(NodeId n, int d, uint64_t seed);

}  // namespace vecnbt

#endif  // VECNBT_GRAPH_H_
