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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "vecnbt/metrics.h"

namespace vecnbt {
namespace {

struct Blobs {
  std::vector<double> points;
  LabelVector labels;
};

Blobs GaussianBlobs(const std::vector<std::vector<double>>& centers,
                    int per_blob, double sd, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  Blobs b;
  for (size_t c = 0; c < centers.size(); ++c) {
    for (int i = 0; i < per_blob; ++i) {
      for (double x : centers[c]) b.points.push_back(x + noise(rng));
      b.labels.push_back(static_cast<int32_t>(c));
    }
  }
  return b;
}

TEST(KMeansTest, SeparatedBlobs) {
  Blobs b = GaussianBlobs({{0, 0}, {100, 100}}, 50, 1.0, 1);
  KMeansResult r = KMeans(b.points, 2, {.k = 2});
  EXPECT_DOUBLE_EQ(Ccr(b.labels, r.labels).rate, 1.0);
}

TEST(KMeansTest, SingleClusterIsMean) {
  Blobs b = GaussianBlobs({{3, -1, 2}}, 40, 2.0, 2);
  KMeansResult r = KMeans(b.points, 3, {.k = 1});
  std::vector<double> mean(3, 0.0);
  for (size_t i = 0; i < b.points.size(); ++i) mean[i % 3] += b.points[i] / 40;
  for (int32_t l : r.labels) EXPECT_EQ(l, 0);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.centroids[j], mean[j], 1e-12);
}

TEST(KMeansTest, DistinctValuesGiveZeroSse) {
  std::vector<double> values = {-5, 0, 7, 20};
  std::vector<double> points;
  LabelVector truth;
  for (int rep = 0; rep < 5; ++rep) {
    for (int v = 0; v < 4; ++v) {
      points.push_back(values[v]);
      truth.push_back(v);
    }
  }
  KMeansResult r = KMeans(points, 1, {.k = 4});
  EXPECT_DOUBLE_EQ(r.sse, 0.0);
  EXPECT_DOUBLE_EQ(Ccr(truth, r.labels).rate, 1.0);
}

TEST(KMeansTest, SseMonotoneAndBestOfRestarts) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Blobs b = GaussianBlobs({{0, 0, 0}, {2, 0, 1}, {0, 3, 1}, {1, 1, 1}}, 30,
                            1.0, seed);
    KMeansResult r = KMeans(b.points, 3, {.k = 4, .restarts = 5, .seed = seed});
    ASSERT_FALSE(r.sse_history.empty());
    for (size_t i = 1; i < r.sse_history.size(); ++i) {
      ASSERT_LE(r.sse_history[i], r.sse_history[i - 1] * (1 + 1e-12));
    }
    ASSERT_EQ(r.restart_sse.size(), 5u);
    EXPECT_DOUBLE_EQ(r.sse, *std::min_element(r.restart_sse.begin(),
                                              r.restart_sse.end()));
    EXPECT_DOUBLE_EQ(r.sse, r.sse_history.back());
  }
}

TEST(KMeansTest, Deterministic) {
  Blobs b = GaussianBlobs({{0, 0}, {1, 1}, {0, 2}}, 40, 0.8, 5);
  KMeansParams params{.k = 3, .seed = 77};
  KMeansResult a = KMeans(b.points, 2, params), c = KMeans(b.points, 2, params);
  EXPECT_EQ(a.labels, c.labels);
  EXPECT_EQ(a.centroids, c.centroids);
}

TEST(KMeansTest, IdenticalPointsAreDegenerateButValid) {
  std::vector<double> points(20, 1.5);  // ten identical 2-D points
  KMeansResult r = KMeans(points, 2, {.k = 3});
  EXPECT_DOUBLE_EQ(r.sse, 0.0);
  ASSERT_EQ(r.labels.size(), 10u);
  for (int32_t l : r.labels) EXPECT_EQ(l, r.labels[0]);
}

TEST(KMeansTest, Errors) {
  std::vector<double> points = {0, 0, 1, 1};
  EXPECT_THROW(KMeans(points, 2, {.k = 3}), std::invalid_argument);
  EXPECT_THROW(KMeans(points, 2, {.k = 0}), std::invalid_argument);
  EXPECT_THROW(KMeans(points, 2, {.k = 1, .restarts = 0}),
               std::invalid_argument);
  EXPECT_THROW(KMeans(points, 2, {.k = 1, .tol = 0}), std::invalid_argument);
  EXPECT_THROW(KMeans(points, 3, {.k = 1}), std::invalid_argument);
}

TEST(ClusterEmbeddingTest, UntrainedRowsGetNearestCentroid) {
  EmbeddingMatrix emb(7, 2);
  const float coords[][2] = {{0, 0}, {0.1f, 0}, {0, 0.1f},
                             {10, 10}, {10.1f, 10}, {10, 10.1f}};
  for (NodeId v = 0; v < 6; ++v) {
    emb.row(v)[0] = coords[v][0];
    emb.row(v)[1] = coords[v][1];
    emb.set_trained(v, true);
  }
  LabelVector labels = ClusterEmbedding(emb, {.k = 2});
  ASSERT_EQ(labels.size(), 7u);
  EXPECT_EQ(labels[0], labels[1]);
  EXPECT_EQ(labels[3], labels[4]);
  EXPECT_NE(labels[0], labels[3]);
  EXPECT_EQ(labels[6], labels[0]);  // zero row sits next to the first blob
}

}  // namespace
}  // namespace vecnbt
