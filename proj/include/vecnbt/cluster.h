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

#ifndef VECNBT_CLUSTER_H_
#define VECNBT_CLUSTER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "vecnbt/embed.h"
#include "vecnbt/graph.h"

namespace vecnbt {

struct KMeansParams {
  int k = 2;
  int restarts = 10;
  int max_iters = 300;
  // Stop once every centroid moved by less than this squared distance.
  double tol = 1e-6;
  uint64_t seed = 1;

  void Validate() const;
};

struct KMeansResult {
  LabelVector labels;
  std::vector<double> centroids;  // k x dim, row-major
  double sse = 0;                 // of the returned (best) restart
  std::vector<double> restart_sse;
  // Assignment cost at the start of every Lloyd iteration of the best
  // restart, followed by the final cost. Non-increasing.
  std::vector<double> sse_history;
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding, best of `restarts` by
// within-cluster sum of squared distances. `points` is row-major with `dim`
// columns. An empty cluster is reseeded with the point farthest from its
// centroid; if every point sits on its centroid the cluster stays empty.
//
// Throws std::invalid_argument when there are fewer points than k.
KMeansResult KMeans(std::span<const double> points, int dim,
                    const KMeansParams& params);

// Runs KMeans on the trained rows only, then gives each untrained row the
// label of its nearest centroid so the result covers every node.
LabelVector ClusterEmbedding(const EmbeddingMatrix& embedding,
                             const KMeansParams& params,
                             KMeansResult* detail = nullptr);

}  // namespace vecnbt

#endif  // VECNBT_CLUSTER_H_
