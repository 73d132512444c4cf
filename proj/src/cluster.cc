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

#include "vecnbt/cluster.h"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "vecnbt/random.h"

namespace vecnbt {

void KMeansParams::Validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
}

namespace {

double SquaredDistance(const double* a, const double* b, int dim) {
  double s = 0;
  for (int i = 0; i < dim; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

struct Run {
  LabelVector labels;
  std::vector<double> centroids;
  std::vector<double> history;
  double sse = 0;
  int iterations = 0;
};

// Nearest centroid, ties to the lowest index.
int32_t Nearest(const double* x, const std::vector<double>& centroids, int k,
                int dim, double* dist) {
  int32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < k; ++c) {
    const double d = SquaredDistance(x, centroids.data() + c * dim, dim);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  *dist = best_d;
  return best;
}

std::vector<double> SeedPlusPlus(std::span<const double> points, size_t n,
                                 int dim, int k, Rng& rng) {
  std::vector<double> centroids(static_cast<size_t>(k) * dim);
  std::uniform_int_distribution<size_t> first(0, n - 1);
  size_t pick = first(rng);
  std::copy_n(points.data() + pick * dim, dim, centroids.begin());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    const double* prev = centroids.data() + (c - 1) * dim;
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(points.data() + i * dim, prev, dim));
      total += d2[i];
    }
    if (total > 0) {
      std::discrete_distribution<size_t> weighted(d2.begin(), d2.end());
      pick = weighted(rng);
    } else {
      pick = first(rng);
    }
    std::copy_n(points.data() + pick * dim, dim,
                centroids.begin() + static_cast<size_t>(c) * dim);
  }
  return centroids;
}

Run Lloyd(std::span<const double> points, size_t n, int dim,
          const KMeansParams& params, Rng& rng) {
  const int k = params.k;
  Run run;
  run.centroids = SeedPlusPlus(points, n, dim, k, rng);
  run.labels.assign(n, 0);
  std::vector<double> dist(n);
  std::vector<double> sums(static_cast<size_t>(k) * dim);
  std::vector<int64_t> sizes(k);

  auto assign = [&] {
    double sse = 0;
    for (size_t i = 0; i < n; ++i) {
      run.labels[i] =
          Nearest(points.data() + i * dim, run.centroids, k, dim, &dist[i]);
      sse += dist[i];
    }
    return sse;
  };

  for (run.iterations = 0; run.iterations < params.max_iters;) {
    run.history.push_back(assign());
    ++run.iterations;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (size_t i = 0; i < n; ++i) {
      const int32_t c = run.labels[i];
      ++sizes[c];
      for (int j = 0; j < dim; ++j) sums[c * dim + j] += points[i * dim + j];
    }
    double shift = 0;
    for (int c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      double* centroid = run.centroids.data() + c * dim;
      double moved = 0;
      for (int j = 0; j < dim; ++j) {
        const double updated = sums[c * dim + j] / static_cast<double>(sizes[c]);
        moved += (updated - centroid[j]) * (updated - centroid[j]);
        centroid[j] = updated;
      }
      shift = std::max(shift, moved);
    }
    // Empty-cluster repair; the moved point's cost drops to zero.
    for (int c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      size_t far = 0;
      double far_d = -1;
      for (size_t i = 0; i < n; ++i) {
        const double d = SquaredDistance(
            points.data() + i * dim,
            run.centroids.data() + run.labels[i] * dim, dim);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d <= 0) break;
      std::copy_n(points.data() + far * dim, dim,
                  run.centroids.begin() + static_cast<size_t>(c) * dim);
      --sizes[run.labels[far]];
      ++sizes[c];
      run.labels[far] = c;
      shift = std::numeric_limits<double>::infinity();
    }
    if (shift < params.tol) break;
  }
  run.sse = assign();
  run.history.push_back(run.sse);
  return run;
}

}  // namespace

KMeansResult KMeans(std::span<const double> points, int dim,
                    const KMeansParams& params) {
  params.Validate();
  if (dim < 1 || points.size() % dim != 0) {
    throw std::invalid_argument("point buffer is not a multiple of dim");
  }
  const size_t n = points.size() / dim;
  if (n < static_cast<size_t>(params.k)) {
    throw std::invalid_argument("k-means needs at least k = " +
                                std::to_string(params.k) + " points, got " +
                                std::to_string(n));
  }
  KMeansResult result;
  Run best;
  for (int r = 0; r < params.restarts; ++r) {
    Rng rng(DeriveSeed(params.seed, {static_cast<uint64_t>(r)}));
    Run run = Lloyd(points, n, dim, params, rng);
    result.restart_sse.push_back(run.sse);
    if (r == 0 || run.sse < best.sse) best = std::move(run);
  }
  result.labels = std::move(best.labels);
  result.centroids = std::move(best.centroids);
  result.sse = best.sse;
  result.sse_history = std::move(best.history);
  result.iterations = best.iterations;
  return result;
}

LabelVector ClusterEmbedding(const EmbeddingMatrix& embedding,
                             const KMeansParams& params,
                             KMeansResult* detail) {
  const int dim = embedding.dim();
  std::vector<NodeId> trained;
  std::vector<double> points;
  for (NodeId v = 0; v < embedding.rows(); ++v) {
    if (!embedding.trained(v)) continue;
    trained.push_back(v);
    for (float x : embedding.row(v)) points.push_back(x);
  }
  KMeansResult fit = KMeans(points, dim, params);

  LabelVector labels(embedding.rows(), 0);
  for (size_t i = 0; i < trained.size(); ++i) labels[trained[i]] = fit.labels[i];
  std::vector<double> row(dim);
  for (NodeId v = 0; v < embedding.rows(); ++v) {
    if (embedding.trained(v)) continue;
    std::copy(embedding.row(v).begin(), embedding.row(v).end(), row.begin());
    double unused;
    labels[v] = Nearest(row.data(), fit.centroids, params.k, dim, &unused);
  }
  if (detail != nullptr) *detail = std::move(fit);
  return labels;
}

}  // namespace vecnbt
