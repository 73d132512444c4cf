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

#include "vecnbt/embed.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "vecnbt/random.h"

namespace vecnbt {

void SgnsParams::Validate() const {
  if (dim < 1) throw std::invalid_argument("embedding dim must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(lr_final > 0.0) || lr_initial < lr_final) {
    throw std::invalid_argument("need lr_initial >= lr_final > 0");
  }
}

EmbeddingMatrix::EmbeddingMatrix(NodeId rows, int dim)
    : rows_(rows),
      dim_(dim),
      data_(static_cast<size_t>(rows) * dim, 0.0f),
      trained_(rows, 0) {}

NodeId EmbeddingMatrix::num_trained() const {
  return static_cast<NodeId>(
      std::count(trained_.begin(), trained_.end(), char{1}));
}

double Sigmoid(double x) {
  x = std::clamp(x, -kSigmoidClamp, kSigmoidClamp);
  return 1.0 / (1.0 + std::exp(-x));
}

namespace {

// log s(x) without overflow.
double LogSigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void CheckGroupShape(std::span<const double> center,
                     std::span<const double> context,
                     std::span<const double> negatives) {
  if (center.empty() || context.size() != center.size() ||
      negatives.size() % center.size() != 0) {
    throw std::invalid_argument("inconsistent SGNS vector sizes");
  }
}

// Dense row access for the deterministic single-threaded mode.
struct PlainOps {
  static float Dot(const float* __restrict a, const float* __restrict b,
                   int d) {
    float s = 0;
#pragma omp simd reduction(+ : s)
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
  }
  // y += g * x
  static void Axpy(float g, const float* __restrict x, float* __restrict y,
                   int d) {
#pragma omp simd
    for (int i = 0; i < d; ++i) y[i] += g * x[i];
  }
  static void Load(const float* x, float* out, int d) {
    std::copy(x, x + d, out);
  }
};

// Relaxed atomic element access for hogwild training: racing writers may
// overwrite each other's increments, but every access is well-defined.
struct RelaxedOps {
  static float Get(const float* p) {
    return std::atomic_ref<float>(*const_cast<float*>(p))
        .load(std::memory_order_relaxed);
  }
  static float Dot(const float* a, const float* b, int d) {
    float s = 0;
    for (int i = 0; i < d; ++i) s += Get(a + i) * Get(b + i);
    return s;
  }
  static void Axpy(float g, const float* x, float* y, int d) {
    for (int i = 0; i < d; ++i) {
      std::atomic_ref<float> ref(y[i]);
      ref.store(ref.load(std::memory_order_relaxed) + g * Get(x + i),
                std::memory_order_relaxed);
    }
  }
  static void Load(const float* x, float* out, int d) {
    for (int i = 0; i < d; ++i) out[i] = Get(x + i);
  }
};

struct Vocabulary {
  std::vector<int32_t> index_of_node;  // -1 if absent
  std::vector<NodeId> node_of_index;
  std::vector<int64_t> counts;
};

Vocabulary BuildVocabulary(const WalkCorpus& corpus, NodeId num_nodes) {
  Vocabulary vocab;
  vocab.index_of_node.assign(num_nodes, -1);
  for (const Sentence& s : corpus.sentences) {
    for (NodeId v : s) {
      if (v < 0 || v >= num_nodes) {
        throw std::invalid_argument("corpus node id " + std::to_string(v) +
                                    " outside [0, " +
                                    std::to_string(num_nodes) + ")");
      }
      int32_t& idx = vocab.index_of_node[v];
      if (idx < 0) {
        idx = static_cast<int32_t>(vocab.node_of_index.size());
        vocab.node_of_index.push_back(v);
        vocab.counts.push_back(0);
      }
      ++vocab.counts[idx];
    }
  }
  return vocab;
}

struct Model {
  int dim;
  std::vector<float> input;   // center vectors, vocab-indexed
  std::vector<float> output;  // context vectors, vocab-indexed
  float* in(int32_t i) { return input.data() + static_cast<size_t>(i) * dim; }
  float* out(int32_t i) { return output.data() + static_cast<size_t>(i) * dim; }
};

// Shared training progress for the learning-rate schedule.
struct Schedule {
  double lr_initial, lr_final;
  int64_t total_tokens;
  std::atomic<int64_t> processed{0};

  float Rate() const {
    double frac = static_cast<double>(processed.load(std::memory_order_relaxed)) /
                  static_cast<double>(total_tokens);
    return static_cast<float>(
        std::max(lr_final, lr_initial - (lr_initial - lr_final) * frac));
  }
};

// Noise distribution unigram^(3/4), sampled with Walker's alias method:
// exact probabilities, O(1) per draw, and two arrays of vocabulary size
// that stay cache resident (a word2vec-style slot table does not).
class NoiseTable {
 public:
  explicit NoiseTable(const std::vector<int64_t>& counts)
      : prob_(counts.size()), alias_(counts.size()) {
    const size_t n = counts.size();
    std::vector<double> scaled(n);
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
      scaled[i] = std::pow(static_cast<double>(counts[i]), 0.75);
      total += scaled[i];
    }
    std::vector<int32_t> small, large;
    for (size_t i = 0; i < n; ++i) {
      scaled[i] *= static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<int32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const int32_t s = small.back(), l = large.back();
      small.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (int32_t i : large) prob_[i] = 1.0, alias_[i] = i;
    for (int32_t i : small) prob_[i] = 1.0, alias_[i] = i;
  }

  int32_t Sample(Rng& rng) const {
    // High 32 bits pick the column, low 32 bits flip the coin.
    const uint64_t bits = rng();
    const size_t column = static_cast<size_t>(((bits >> 32) * prob_.size()) >> 32);
    const double coin = static_cast<double>(bits & 0xffffffffu) * 0x1p-32;
    return coin < prob_[column] ? static_cast<int32_t>(column) : alias_[column];
  }

 private:
  std::vector<double> prob_;
  std::vector<int32_t> alias_;
};

// Tabulated sigmoid on [-6, 6] for the training loop; the loss is only
// diagnostic, so table resolution (~1e-3) is harmless there too.
class SigmoidTable {
 public:
  SigmoidTable() {
    for (int i = 0; i <= kSize; ++i) {
      table_[i] = static_cast<float>(
          Sigmoid((2.0 * i / kSize - 1.0) * kSigmoidClamp));
    }
  }
  float operator()(float x) const {
    constexpr float kScale = kSize / (2.0f * static_cast<float>(kSigmoidClamp));
    const float pos = (x + static_cast<float>(kSigmoidClamp)) * kScale + 0.5f;
    const int i = static_cast<int>(std::clamp(pos, 0.0f, float{kSize}));
    return table_[i];
  }

 private:
  static constexpr int kSize = 2048;
  float table_[kSize + 1];
};

const SigmoidTable kFastSigmoid;

// One pass over sentences [begin, end).
template <typename Ops>
int64_t TrainShard(const WalkCorpus& corpus, size_t begin, size_t end,
                   const Vocabulary& vocab, const NoiseTable& noise,
                   const SgnsParams& params, Model& model, Schedule& schedule,
                   uint64_t seed) {
  const int d = model.dim;
  Rng rng(seed);
  std::vector<float> grad(d), center(d);
  std::vector<int32_t> ids;
  int64_t pairs = 0;
  for (size_t si = begin; si < end; ++si) {
    const Sentence& s = corpus.sentences[si];
    const int len = static_cast<int>(s.size());
    const float lr = schedule.Rate();
    ids.resize(len);
    for (int p = 0; p < len; ++p) ids[p] = vocab.index_of_node[s[p]];

    for (int p = 0; p < len; ++p) {
      float* u = model.in(ids[p]);
      const int lo = std::max(0, p - params.window);
      const int hi = std::min(len - 1, p + params.window);
      for (int q = lo; q <= hi; ++q) {
        if (q == p) continue;
        const int32_t context = ids[q];
        Ops::Load(u, center.data(), d);
        std::fill(grad.begin(), grad.end(), 0.0f);
        for (int k = 0; k <= params.negatives; ++k) {
          int32_t target = context;
          float label = 1.0f;
          if (k > 0) {
            target = noise.Sample(rng);
            if (target == context) continue;
            label = 0.0f;
          }
          float* v = model.out(target);
          const float sig = kFastSigmoid(Ops::Dot(center.data(), v, d));
          const float g = (label - sig) * lr;
          Ops::Axpy(g, v, grad.data(), d);
          Ops::Axpy(g, center.data(), v, d);
        }
        Ops::Axpy(1.0f, grad.data(), u, d);
        ++pairs;
      }
    }
    schedule.processed.fetch_add(len, std::memory_order_relaxed);
  }
  return pairs;
}

// Mean negative objective per (center, context) pair of the current model
// over the whole corpus. The negatives come from a fixed seed, so successive
// evaluations see the same noise draws.
double EvaluateLoss(const WalkCorpus& corpus, const Vocabulary& vocab,
                    const NoiseTable& noise, const SgnsParams& params,
                    Model& model, uint64_t seed) {
  const int d = model.dim;
  Rng rng(seed);
  double loss = 0;
  int64_t pairs = 0;
  for (const Sentence& s : corpus.sentences) {
    const int len = static_cast<int>(s.size());
    for (int p = 0; p < len; ++p) {
      const float* u = model.in(vocab.index_of_node[s[p]]);
      const int lo = std::max(0, p - params.window);
      const int hi = std::min(len - 1, p + params.window);
      for (int q = lo; q <= hi; ++q) {
        if (q == p) continue;
        const int32_t context = vocab.index_of_node[s[q]];
        loss -= LogSigmoid(PlainOps::Dot(u, model.out(context), d));
        for (int k = 0; k < params.negatives; ++k) {
          const int32_t target = noise.Sample(rng);
          if (target == context) continue;
          loss -= LogSigmoid(-PlainOps::Dot(u, model.out(target), d));
        }
        ++pairs;
      }
    }
  }
  return loss / static_cast<double>(pairs);
}

}  // namespace

double SgnsObjective(std::span<const double> center,
                     std::span<const double> context,
                     std::span<const double> negatives) {
  CheckGroupShape(center, context, negatives);
  const size_t d = center.size();
  double value = LogSigmoid(Dot(center, context));
  for (size_t off = 0; off < negatives.size(); off += d) {
    value += LogSigmoid(-Dot(center, negatives.subspan(off, d)));
  }
  return value;
}

SgnsGradient SgnsObjectiveGradient(std::span<const double> center,
                                   std::span<const double> context,
                                   std::span<const double> negatives) {
  CheckGroupShape(center, context, negatives);
  const size_t d = center.size();
  SgnsGradient grad;
  grad.center.assign(d, 0.0);
  grad.context.assign(d, 0.0);
  grad.negatives.assign(negatives.size(), 0.0);
  // d/dx log s(x) = 1 - s(x); d/dx log s(-x) = -s(x).
  const double gp = 1.0 - Sigmoid(Dot(center, context));
  for (size_t i = 0; i < d; ++i) {
    grad.center[i] += gp * context[i];
    grad.context[i] = gp * center[i];
  }
  for (size_t off = 0; off < negatives.size(); off += d) {
    auto neg = negatives.subspan(off, d);
    const double gn = -Sigmoid(Dot(center, neg));
    for (size_t i = 0; i < d; ++i) {
      grad.center[i] += gn * neg[i];
      grad.negatives[off + i] = gn * center[i];
    }
  }
  return grad;
}

EmbeddingMatrix TrainSgns(const WalkCorpus& corpus, NodeId num_nodes,
                          const SgnsParams& params, TrainingStats* stats) {
  params.Validate();
  if (corpus.num_tokens() == 0) {
    throw std::invalid_argument("cannot train on an empty corpus");
  }
  const Vocabulary vocab = BuildVocabulary(corpus, num_nodes);
  const int d = params.dim;
  const int32_t vocab_size = static_cast<int32_t>(vocab.node_of_index.size());

  Model model{d, std::vector<float>(static_cast<size_t>(vocab_size) * d),
              std::vector<float>(static_cast<size_t>(vocab_size) * d, 0.0f)};
  {
    Rng rng(DeriveSeed(params.seed, {0}));
    std::uniform_real_distribution<float> init(-0.5f / d, 0.5f / d);
    for (float& x : model.input) x = init(rng);
  }

  const NoiseTable noise(vocab.counts);
  Schedule schedule{params.lr_initial, params.lr_final,
                    params.epochs * corpus.num_tokens()};
  if (stats != nullptr) stats->epoch_loss.clear();
  int64_t updates = 0;

  const size_t num_sentences = corpus.sentences.size();
  const size_t threads = std::min<size_t>(
      static_cast<size_t>(params.num_threads), num_sentences);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const uint64_t e = static_cast<uint64_t>(epoch);
    if (threads <= 1) {
      updates += TrainShard<PlainOps>(corpus, 0, num_sentences, vocab, noise,
                                      params, model, schedule,
                                      DeriveSeed(params.seed, {1, e}));
    } else {
      std::vector<int64_t> counts(threads, 0);
      {
        std::vector<std::jthread> pool;
        const size_t chunk = (num_sentences + threads - 1) / threads;
        for (size_t t = 0; t < threads; ++t) {
          const size_t b = t * chunk, end = std::min(num_sentences, b + chunk);
          pool.emplace_back([&, t, b, end] {
            counts[t] = TrainShard<RelaxedOps>(
                corpus, b, end, vocab, noise, params, model, schedule,
                DeriveSeed(params.seed, {1, e, t + 1}));
          });
        }
      }
      for (int64_t c : counts) updates += c;
    }
    if (stats != nullptr) {
      stats->epoch_loss.push_back(EvaluateLoss(
          corpus, vocab, noise, params, model, DeriveSeed(params.seed, {2})));
    }
  }
  if (stats != nullptr) stats->pair_updates = updates;

  EmbeddingMatrix result(num_nodes, d);
  for (int32_t i = 0; i < vocab_size; ++i) {
    const NodeId v = vocab.node_of_index[i];
    std::copy_n(model.in(i), d, result.row(v).begin());
    result.set_trained(v, true);
  }
  return result;
}

}  // namespace vecnbt
