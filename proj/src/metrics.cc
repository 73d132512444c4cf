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

#include "vecnbt/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vecnbt {

namespace {

void CheckInputs(std::span<const int32_t> truth,
                 std::span<const int32_t> predicted,
                 std::span<const char> include) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("label vectors differ in length: " +
                                std::to_string(truth.size()) + " vs " +
                                std::to_string(predicted.size()));
  }
  if (!include.empty() && include.size() != truth.size()) {
    throw std::invalid_argument("mask length does not match labels");
  }
  for (size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || predicted[i] < 0) {
      throw std::invalid_argument("negative label at position " +
                                  std::to_string(i));
    }
  }
}

double Entropy(const std::vector<int64_t>& counts, double total) {
  double h = 0;
  for (int64_t c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

CountMatrix ConfusionMatrix(std::span<const int32_t> truth,
                            std::span<const int32_t> predicted,
                            std::span<const char> include) {
  CheckInputs(truth, predicted, include);
  int32_t k = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    k = std::max({k, truth[i] + 1, predicted[i] + 1});
  }
  CountMatrix confusion(k, std::vector<int64_t>(k, 0));
  for (size_t i = 0; i < truth.size(); ++i) {
    if (include.empty() || include[i]) ++confusion[predicted[i]][truth[i]];
  }
  return confusion;
}

std::vector<int32_t> MaxWeightAssignment(const CountMatrix& weights) {
  const int n = static_cast<int>(weights.size());
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("assignment matrix must be square");
    }
  }
  if (n == 0) return {};
  // Shortest augmenting paths with potentials on cost = -weight; 1-based
  // with column 0 as the virtual source.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur =
            -static_cast<double>(weights[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int32_t> assignment(n);
  for (int j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

CcrResult Ccr(std::span<const int32_t> truth,
              std::span<const int32_t> predicted,
              std::span<const char> include) {
  const CountMatrix confusion = ConfusionMatrix(truth, predicted, include);
  CcrResult result;
  result.assignment = MaxWeightAssignment(confusion);
  int64_t matched = 0, total = 0;
  for (size_t p = 0; p < confusion.size(); ++p) {
    matched += confusion[p][result.assignment[p]];
    for (int64_t c : confusion[p]) total += c;
  }
  result.rate = total > 0 ? static_cast<double>(matched) / total : 0.0;
  return result;
}

double Nmi(std::span<const int32_t> truth, std::span<const int32_t> predicted,
           std::span<const char> include) {
  const CountMatrix confusion = ConfusionMatrix(truth, predicted, include);
  const size_t k = confusion.size();
  std::vector<int64_t> pred_counts(k, 0), true_counts(k, 0), joint;
  int64_t total = 0;
  for (size_t p = 0; p < k; ++p) {
    for (size_t t = 0; t < k; ++t) {
      pred_counts[p] += confusion[p][t];
      true_counts[t] += confusion[p][t];
      joint.push_back(confusion[p][t]);
      total += confusion[p][t];
    }
  }
  if (total == 0) return 0.0;
  const double n = static_cast<double>(total);
  const double hx = Entropy(true_counts, n);
  const double hy = Entropy(pred_counts, n);
  if (hx <= 0 || hy <= 0) {
    // Same partition iff the confusion matrix has one nonzero per row and
    // per column.
    auto nonzeros = [](const std::vector<int64_t>& v) {
      return std::count_if(v.begin(), v.end(), [](int64_t c) { return c > 0; });
    };
    return nonzeros(true_counts) == nonzeros(pred_counts) &&
                   nonzeros(joint) == nonzeros(true_counts)
               ? 1.0
               : 0.0;
  }
  const double hxy = Entropy(joint, n);
  return std::clamp((hx + hy - hxy) / std::sqrt(hx * hy), 0.0, 1.0);
}

MetricsReport Score(std::span<const int32_t> truth,
                    std::span<const int32_t> predicted,
                    std::span<const char> include) {
  MetricsReport report;
  CcrResult ccr = Ccr(truth, predicted, include);
  report.ccr = ccr.rate;
  report.assignment = std::move(ccr.assignment);
  report.nmi = Nmi(truth, predicted, include);
  report.confusion = ConfusionMatrix(truth, predicted, include);
  for (const auto& row : report.confusion) {
    for (int64_t c : row) report.scored_nodes += c;
  }
  return report;
}

}  // namespace vecnbt
