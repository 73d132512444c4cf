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

#ifndef VECNBT_EMBED_H_
#define VECNBT_EMBED_H_

#include <cstdint>
#include <span>
#include <vector>

#include "vecnbt/graph.h"
#include "vecnbt/walks.h"

namespace vecnbt {

// Skip-gram with negative sampling. Defaults follow the reference word2vec
// tool, with a fixed (not sampled) context window and no subsampling.
struct SgnsParams {
  int dim = 50;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double lr_initial = 0.025;
  double lr_final = 0.0001;
  uint64_t seed = 1;
  // 1 is the deterministic mode. Larger values train hogwild-style over
  // sentence shards; concurrent updates may be lost.
  int num_threads = 1;

  // Throws std::invalid_argument.
  void Validate() const;
};

class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(NodeId rows, int dim);

  NodeId rows() const { return rows_; }
  int dim() const { return dim_; }

  std::span<float> row(NodeId v) {
    return {data_.data() + static_cast<size_t>(v) * dim_,
            static_cast<size_t>(dim_)};
  }
  std::span<const float> row(NodeId v) const {
    return {data_.data() + static_cast<size_t>(v) * dim_,
            static_cast<size_t>(dim_)};
  }

  // Rows of nodes that never occurred in the training corpus are untrained
  // (and zero).
  bool trained(NodeId v) const { return trained_[v] != 0; }
  void set_trained(NodeId v, bool value) { trained_[v] = value ? 1 : 0; }
  NodeId num_trained() const;

  const std::vector<float>& data() const { return data_; }

 private:
  NodeId rows_ = 0;
  int dim_ = 0;
  std::vector<float> data_;
  std::vector<char> trained_;
};

struct TrainingStats {
  // Mean negative objective per (center, context) pair over the whole corpus,
  // evaluated after each epoch with a fixed set of noise draws. Requesting
  // stats roughly doubles training time.
  std::vector<double> epoch_loss;
  int64_t pair_updates = 0;
};

// Trains input ("center") vectors. For every position and every context
// position within the window, ascends
//   log s(u_center . v_context) + sum_neg log s(-u_center . v_neg)
// with negatives drawn from unigram^(3/4) and a learning rate decaying
// linearly from lr_initial to lr_final over all epochs.
//
// Throws std::invalid_argument for an empty corpus or a node id >= num_nodes.
// With num_threads == 1 the result is bit-reproducible for a given seed, and
// equivariant under relabeling of node ids: internal rows are assigned in
// order of first occurrence in the corpus.
EmbeddingMatrix TrainSgns(const WalkCorpus& corpus, NodeId num_nodes,
                          const SgnsParams& params,
                          TrainingStats* stats = nullptr);

// Inputs are clamped to [-kSigmoidClamp, kSigmoidClamp].
inline constexpr double kSigmoidClamp = 6.0;
double Sigmoid(double x);

// Single-group SGNS objective with exact log-sigmoid. `negatives` holds the
// negative context vectors back to back, each of center.size() entries.
double SgnsObjective(std::span<const double> center,
                     std::span<const double> context,
                     std::span<const double> negatives);

struct SgnsGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<double> negatives;
};

// Analytic gradient of SgnsObjective. This is the direction TrainSgns
// follows (scaled by the learning rate) for each group.
SgnsGradient SgnsObjectiveGradient(std::span<const double> center,
                                   std::span<const double> context,
                                   std::span<const double> negatives);

}  // namespace vecnbt

#endif  // VECNBT_EMBED_H_
