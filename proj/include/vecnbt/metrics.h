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

#ifndef VECNBT_METRICS_H_
#define VECNBT_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "vecnbt/graph.h"

namespace vecnbt {

using CountMatrix = std::vector<std::vector<int64_t>>;

// Square K x K matrix, K = max label + 1 over both labelings; entry [p][t]
// counts nodes with predicted label p and true label t. Nodes with
// include[v] == false are skipped when `include` is non-empty.
CountMatrix ConfusionMatrix(std::span<const int32_t> truth,
                            std::span<const int32_t> predicted,
                            std::span<const char> include = {});

// Maximum-weight perfect matching on a square matrix (Hungarian method,
// O(K^3)). Returns assignment[row] = column.
std::vector<int32_t> MaxWeightAssignment(const CountMatrix& weights);

struct CcrResult {
  double rate = 0;
  // assignment[p] = true label matched to predicted label p.
  std::vector<int32_t> assignment;
};

// Correct classification rate under the best one-to-one relabeling of the
// predicted clusters. Throws std::invalid_argument on length mismatch or
// negative labels.
CcrResult Ccr(std::span<const int32_t> truth,
              std::span<const int32_t> predicted,
              std::span<const char> include = {});

// (H(X) + H(Y) - H(X, Y)) / sqrt(H(X) H(Y)) with natural-log entropies.
// When either labeling has zero entropy the result is 1 if the two
// labelings induce the same partition and 0 otherwise.
double Nmi(std::span<const int32_t> truth, std::span<const int32_t> predicted,
           std::span<const char> include = {});

struct MetricsReport {
  double ccr = 0;
  double nmi = 0;
  std::vector<int32_t> assignment;
  CountMatrix confusion;
  int64_t scored_nodes = 0;
};

MetricsReport Score(std::span<const int32_t> truth,
                    std::span<const int32_t> predicted,
                    std::span<const char> include = {});

}  // namespace vecnbt

#endif  // VECNBT_METRICS_H_
