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

#include "vecnbt/walks.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <thread>

namespace vecnbt {

std::string_view WalkPolicyName(WalkPolicy policy) {
  switch (policy) {
    case WalkPolicy::kSimple:
      return "simple";
    case WalkPolicy::kNonBacktracking:
      return "nonbacktracking";
    case WalkPolicy::kBegrudging:
      return "begrudging";
  }
  return "unknown";
}

WalkPolicy ParseWalkPolicy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "simple" || lower == "bt") return WalkPolicy::kSimple;
  if (lower == "nonbacktracking" || lower == "nbt") {
    return WalkPolicy::kNonBacktracking;
  }
  if (lower == "begrudging") return WalkPolicy::kBegrudging;
  throw std::invalid_argument("unknown walk policy '" + std::string(name) +
                              "'");
}

int64_t WalkCorpus::num_tokens() const {
  int64_t total = 0;
  for (const auto& s : sentences) total += static_cast<int64_t>(s.size());
  return total;
}

NodeId WalkCorpus::max_node() const {
  NodeId best = -1;
  for (const auto& s : sentences) {
    for (NodeId v : s) best = std::max(best, v);
  }
  return best;
}

namespace {

NodeId UniformNeighbor(std::span<const NodeId> nbrs, Rng& rng) {
  std::uniform_int_distribution<size_t> pick(0, nbrs.size() - 1);
  return nbrs[pick(rng)];
}

// Rejection sampling over neighbors other than `excluded`. Requires at least
// one neighbor different from `excluded`.
NodeId UniformNeighborExcept(std::span<const NodeId> nbrs, NodeId excluded,
                             Rng& rng) {
  std::uniform_int_distribution<size_t> pick(0, nbrs.size() - 1);
  for (;;) {
    NodeId v = nbrs[pick(rng)];
    if (v != excluded) return v;
  }
}

}  // namespace

std::optional<NodeId> StepSimple(const Graph& g, NodeId current, Rng& rng) {
  auto nbrs = g.neighbors(current);
  if (nbrs.empty()) return std::nullopt;
  return UniformNeighbor(nbrs, rng);
}

std::optional<NodeId> StepNonBacktracking(const Graph& g, NodeId current,
                                          std::optional<NodeId> previous,
                                          Rng& rng) {
  auto nbrs = g.neighbors(current);
  if (nbrs.empty()) return std::nullopt;
  if (!previous) return UniformNeighbor(nbrs, rng);
  if (nbrs.size() == 1 && nbrs[0] == *previous) return std::nullopt;
  return UniformNeighborExcept(nbrs, *previous, rng);
}

std::optional<NodeId> StepBegrudging(const Graph& g, NodeId current,
                                     std::optional<NodeId> previous,
                                     Rng& rng) {
  auto nbrs = g.neighbors(current);
  if (nbrs.empty()) return std::nullopt;
  if (!previous) return UniformNeighbor(nbrs, rng);
  if (nbrs.size() == 1) return nbrs[0];
  return UniformNeighborExcept(nbrs, *previous, rng);
}

Sentence Walk(const Graph& g, NodeId start, int length, WalkPolicy policy,
              Rng& rng) {
  Sentence walk;
  walk.reserve(length + 1);
  walk.push_back(start);
  std::optional<NodeId> previous;
  NodeId current = start;
  for (int step = 0; step < length; ++step) {
    std::optional<NodeId> next;
    switch (policy) {
      case WalkPolicy::kSimple:
        next = StepSimple(g, current, rng);
        break;
      case WalkPolicy::kNonBacktracking:
        next = StepNonBacktracking(g, current, previous, rng);
        break;
      case WalkPolicy::kBegrudging:
        next = StepBegrudging(g, current, previous, rng);
        break;
    }
    if (!next) break;
    walk.push_back(*next);
    previous = current;
    current = *next;
  }
  return walk;
}

WalkCorpus BuildCorpus(const Graph& g, const WalkParams& params) {
  if (params.walks_per_node < 1) {
    throw std::invalid_argument("walks_per_node must be >= 1");
  }
  if (params.length < 1) throw std::invalid_argument("walk length must be >= 1");

  std::vector<NodeId> starts;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.degree_unchecked(v) > 0) starts.push_back(v);
  }
  const int r = params.walks_per_node;
  WalkCorpus corpus;
  corpus.sentences.resize(starts.size() * r);

  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const NodeId v = starts[i];
      for (int t = 0; t < r; ++t) {
        Rng rng(DeriveSeed(params.seed, {static_cast<uint64_t>(v),
                                         static_cast<uint64_t>(t)}));
        corpus.sentences[i * r + t] =
            Walk(g, v, params.length, params.policy, rng);
      }
    }
  };

  const size_t threads = static_cast<size_t>(std::max(1, params.num_threads));
  if (threads == 1 || starts.size() < 2 * threads) {
    work(0, starts.size());
    return corpus;
  }
  std::vector<std::jthread> pool;
  const size_t chunk = (starts.size() + threads - 1) / threads;
  for (size_t b = 0; b < starts.size(); b += chunk) {
    pool.emplace_back(work, b, std::min(starts.size(), b + chunk));
  }
  pool.clear();
  return corpus;
}

int64_t CooccurrenceMatrix::count(NodeId i, NodeId j) const {
  auto it = counts_.find(Key(i, j));
  return it == counts_.end() ? 0 : it->second;
}

void CooccurrenceMatrix::Add(NodeId i, NodeId j, int64_t amount) {
  counts_[Key(i, j)] += amount;
  total_ += amount;
}

std::vector<std::pair<Edge, int64_t>> CooccurrenceMatrix::Entries() const {
  std::vector<std::pair<Edge, int64_t>> out;
  out.reserve(counts_.size());
  for (const auto& [key, value] : counts_) {
    out.push_back({{static_cast<NodeId>(key >> 32),
                    static_cast<NodeId>(key & 0xffffffffULL)},
                   value});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

CooccurrenceMatrix BuildCooccurrence(const WalkCorpus& corpus, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  CooccurrenceMatrix counts(window);
  for (const Sentence& s : corpus.sentences) {
    const int len = static_cast<int>(s.size());
    for (int p = 0; p < len; ++p) {
      for (int q = p + 1; q <= std::min(len - 1, p + window); ++q) {
        counts.Add(s[p], s[q]);
        counts.Add(s[q], s[p]);
      }
    }
  }
  return counts;
}

}  // namespace vecnbt
