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

#ifndef VECNBT_WALKS_H_
#define VECNBT_WALKS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vecnbt/graph.h"
#include "vecnbt/random.h"

namespace vecnbt {

enum class WalkPolicy {
  kSimple,           // uniform over all neighbors
  kNonBacktracking,  // excludes the previous node; ends at dangling nodes
  kBegrudging,       // excludes the previous node unless it is the only one
};

std::string_view WalkPolicyName(WalkPolicy policy);
// Accepts "simple"/"bt", "nonbacktracking"/"nbt", "begrudging"; case-insensitive.
WalkPolicy ParseWalkPolicy(std::string_view name);

struct WalkParams {
  int walks_per_node = 10;  // r
  int length = 60;          // steps; a full walk visits length + 1 nodes
  WalkPolicy policy = WalkPolicy::kSimple;
  uint64_t seed = 1;
  int num_threads = 1;
};

using Sentence = std::vector<NodeId>;

struct WalkCorpus {
  std::vector<Sentence> sentences;

  int64_t num_tokens() const;
  // Largest node id that occurs, or -1 for an empty corpus.
  NodeId max_node() const;
};

// Each step returns std::nullopt as the walk-termination signal.

// Uniform neighbor of `current`; nullopt when current is isolated.
std::optional<NodeId> StepSimple(const Graph& g, NodeId current, Rng& rng);

// Uniform over neighbors(current) \ {previous}; nullopt when that set is empty.
std::optional<NodeId> StepNonBacktracking(const Graph& g, NodeId current,
                                          std::optional<NodeId> previous,
                                          Rng& rng);

// As StepNonBacktracking, but returns `previous` when it is the only
// neighbor. nullopt only for an isolated node.
std::optional<NodeId> StepBegrudging(const Graph& g, NodeId current,
                                     std::optional<NodeId> previous, Rng& rng);

// One walk of up to `length` steps from `start`. Truncated walks (dangling
// termination) are returned as-is.
Sentence Walk(const Graph& g, NodeId start, int length, WalkPolicy policy,
              Rng& rng);

// r walks from every node of positive degree, ordered by (node, t). Walk
// (v, t) draws from its own stream DeriveSeed(seed, {v, t}), so the result
// does not depend on num_threads.
WalkCorpus BuildCorpus(const Graph& g, const WalkParams& params);

// Skip-gram co-occurrence counts: counts(i, j) is the number of ordered
// position pairs (p, q), 0 < |p - q| <= window, with sentence[p] = i and
// sentence[q] = j, summed over sentences.
class CooccurrenceMatrix {
 public:
  explicit CooccurrenceMatrix(int window) : window_(window) {}

  int window() const { return window_; }
  int64_t count(NodeId i, NodeId j) const;
  void Add(NodeId i, NodeId j, int64_t amount = 1);
  int64_t total() const { return total_; }
  size_t nonzeros() const { return counts_.size(); }
  // Nonzero entries sorted by (i, j).
  std::vector<std::pair<Edge, int64_t>> Entries() const;

 private:
  static uint64_t Key(NodeId i, NodeId j) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) |
           static_cast<uint32_t>(j);
  }

  int window_;
  int64_t total_ = 0;
  std::unordered_map<uint64_t, int64_t> counts_;
};

CooccurrenceMatrix BuildCooccurrence(const WalkCorpus& corpus, int window);

}  // namespace vecnbt

#endif  // VECNBT_WALKS_H_
