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

#include "vecnbt/spectral.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "vecnbt/random.h"

namespace vecnbt {

namespace {

using Triplet = Eigen::Triplet<double, int64_t>;

SparseMatrix FromTriplets(int64_t rows, int64_t cols,
                          const std::vector<Triplet>& triplets) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SparseMatrix AdjacencyMatrix(const Graph& g) {
  std::vector<Triplet> t;
  t.reserve(2 * g.num_edges());
  for (const Edge& e : g.edges()) {
    t.emplace_back(e.u, e.v, 1.0);
    t.emplace_back(e.v, e.u, 1.0);
  }
  return FromTriplets(g.num_nodes(), g.num_nodes(), t);
}

VertexTransitionMatrix BuildVertexTransition(const Graph& g) {
  VertexTransitionMatrix p;
  p.zero_rows.assign(g.num_nodes(), 0);
  std::vector<Triplet> t;
  t.reserve(2 * g.num_edges());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const int d = g.degree_unchecked(u);
    if (d == 0) {
      p.zero_rows[u] = 1;
      continue;
    }
    for (NodeId v : g.neighbors(u)) t.emplace_back(u, v, 1.0 / d);
  }
  p.matrix = FromTriplets(g.num_nodes(), g.num_nodes(), t);
  return p;
}

EdgeTransitionMatrix BuildEdgeTransition(const Graph& g, EdgeWalkMode mode) {
  const int required = mode == EdgeWalkMode::kNonBacktracking ? 2 : 1;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (g.degree_unchecked(u) < required) {
      throw std::invalid_argument(
          std::string(mode == EdgeWalkMode::kNonBacktracking
                          ? "non-backtracking"
                          : "begrudging") +
          " edge chain needs minimum degree " + std::to_string(required) +
          "; node " + std::to_string(u) + " has degree " +
          std::to_string(g.degree_unchecked(u)));
    }
  }
  std::vector<Triplet> t;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto nbrs = g.neighbors(u);
    auto ids = g.out_edges(u);
    for (size_t i = 0; i < nbrs.size(); ++i) {
      const NodeId v = nbrs[i];
      const EdgeId from = ids[i];
      const int dv = g.degree_unchecked(v);
      if (dv == 1) {
        // Only reachable in begrudging mode.
        t.emplace_back(from, from ^ 1, 1.0);
        continue;
      }
      auto next_nbrs = g.neighbors(v);
      auto next_ids = g.out_edges(v);
      for (size_t j = 0; j < next_nbrs.size(); ++j) {
        if (next_nbrs[j] != u) t.emplace_back(from, next_ids[j], 1.0 / (dv - 1));
      }
    }
  }
  return {FromTriplets(g.num_directed_edges(), g.num_directed_edges(), t),
          mode};
}

LaplacianSet BuildLaplacians(const Graph& g) {
  const NodeId n = g.num_nodes();
  std::vector<Triplet> comb, sym, rw;
  for (NodeId u = 0; u < n; ++u) {
    const int du = g.degree_unchecked(u);
    comb.emplace_back(u, u, du);
    sym.emplace_back(u, u, 1.0);
    rw.emplace_back(u, u, 1.0);
    for (NodeId v : g.neighbors(u)) {
      const int dv = g.degree_unchecked(v);
      comb.emplace_back(u, v, -1.0);
      sym.emplace_back(u, v, -1.0 / std::sqrt(static_cast<double>(du) * dv));
      rw.emplace_back(u, v, -1.0 / du);
    }
  }
  return {FromTriplets(n, n, comb), FromTriplets(n, n, sym),
          FromTriplets(n, n, rw)};
}

StochasticityCheck CheckRowStochastic(const SparseMatrix& m,
                                      const std::vector<char>& skip_rows,
                                      double tol) {
  StochasticityCheck check;
  for (int64_t r = 0; r < m.outerSize(); ++r) {
    if (!skip_rows.empty() && skip_rows[r]) continue;
    double sum = 0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) sum += it.value();
    check.max_row_deviation =
        std::max(check.max_row_deviation, std::abs(sum - 1.0));
  }
  check.ok = check.max_row_deviation <= tol;
  return check;
}

StochasticityCheck CheckDoublyStochastic(const SparseMatrix& m, double tol) {
  StochasticityCheck check = CheckRowStochastic(m, {}, tol);
  std::vector<double> columns(m.cols(), 0.0);
  for (int64_t r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      columns[it.col()] += it.value();
    }
  }
  for (double c : columns) {
    check.max_column_deviation =
        std::max(check.max_column_deviation, std::abs(c - 1.0));
  }
  check.ok = m.rows() == m.cols() && check.max_deviation() <= tol;
  return check;
}

Ergodicity CheckErgodicity(const SparseMatrix& m) {
  Ergodicity result;
  const int64_t n = m.rows();
  if (n == 0 || m.cols() != n) return result;

  std::vector<std::vector<int64_t>> reverse(n);
  for (int64_t r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.value() > 0) reverse[it.col()].push_back(r);
    }
  }
  // BFS levels from node 0 along positive entries.
  std::vector<int64_t> level(n, -1);
  std::queue<int64_t> queue;
  level[0] = 0;
  queue.push(0);
  int64_t reached = 0;
  while (!queue.empty()) {
    const int64_t r = queue.front();
    queue.pop();
    ++reached;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.value() > 0 && level[it.col()] < 0) {
        level[it.col()] = level[r] + 1;
        queue.push(it.col());
      }
    }
  }
  std::vector<char> back(n, 0);
  back[0] = 1;
  queue.push(0);
  int64_t back_reached = 0;
  while (!queue.empty()) {
    const int64_t r = queue.front();
    queue.pop();
    ++back_reached;
    for (int64_t s : reverse[r]) {
      if (!back[s]) {
        back[s] = 1;
        queue.push(s);
      }
    }
  }
  result.irreducible = reached == n && back_reached == n;
  if (!result.irreducible) return result;

  // In a strongly connected digraph the period is the gcd over all arcs
  // (u, v) of level(u) + 1 - level(v).
  int64_t period = 0;
  for (int64_t r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.value() > 0) {
        period = std::gcd(period, std::abs(level[r] + 1 - level[it.col()]));
      }
    }
  }
  result.period = period;
  result.aperiodic = period == 1;
  return result;
}

double StationaryResidual(const SparseMatrix& m, const std::vector<double>& x) {
  Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<int64_t>(x.size()));
  Eigen::VectorXd next = m.transpose() * v;
  return (next - v).lpNorm<1>();
}

std::vector<double> StationaryDistribution(
    const SparseMatrix& m, const PowerIterationOptions& options) {
  if (!CheckErgodicity(m).ergodic()) {
    throw std::invalid_argument(
        "stationary distribution requires an irreducible, aperiodic chain");
  }
  const int64_t n = m.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  const SparseMatrix mt = m.transpose();
  double residual = 0;
  for (int64_t it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd next = mt * x;
    next /= next.sum();
    residual = (next - x).lpNorm<1>();
    x.swap(next);
    if (residual < options.tolerance) {
      return {x.data(), x.data() + n};
    }
  }
  throw ConvergenceError("power iteration for the stationary distribution",
                         residual);
}

namespace {

// Dominant Ritz values of a linear operator by orthogonal subspace iteration
// with Rayleigh-Ritz extraction. Stops when the top `watch` Ritz values
// (sorted by modulus for general operators, by value for symmetric ones)
// change by less than the tolerance between checks. Convergence needs a gap
// below the watched values; a general operator with a whole circle of
// eigenvalues at the top modulus (non-backtracking chains of Ramanujan
// graphs) will exhaust the iteration budget.
template <typename Apply>
std::vector<std::complex<double>> SubspaceRitzValues(Apply apply, int64_t dim,
                                                     bool symmetric, int watch,
                                                     const EigenOptions& opts) {
  const int p = static_cast<int>(
      std::min<int64_t>(std::max(opts.block_size, watch + 1), dim));
  Rng rng(opts.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd q(dim, p);
  for (int64_t i = 0; i < q.size(); ++i) q.data()[i] = gauss(rng);
  q = Eigen::HouseholderQR<Eigen::MatrixXd>(q).householderQ() *
      Eigen::MatrixXd::Identity(dim, p);

  auto ritz = [&](const Eigen::MatrixXd& basis, const Eigen::MatrixXd& image) {
    Eigen::MatrixXd h = basis.transpose() * image;
    std::vector<std::complex<double>> values;
    if (symmetric) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
      for (int i = p - 1; i >= 0; --i) values.emplace_back(es.eigenvalues()[i]);
    } else {
      Eigen::EigenSolver<Eigen::MatrixXd> es(h, false);
      for (int i = 0; i < p; ++i) values.push_back(es.eigenvalues()[i]);
      std::sort(values.begin(), values.end(), [](auto a, auto b) {
        return std::abs(a) > std::abs(b);
      });
    }
    return values;
  };

  std::vector<std::complex<double>> previous;
  double change = std::numeric_limits<double>::infinity();
  for (int64_t it = 1; it <= opts.max_iterations; ++it) {
    Eigen::MatrixXd z = apply(q);
    if (it % 10 == 0) {
      auto values = ritz(q, z);
      if (!previous.empty()) {
        change = 0;
        for (int i = 0; i < watch; ++i) {
          // Conjugate pairs may swap order, so general spectra compare moduli.
          const double delta =
              symmetric ? std::abs(values[i] - previous[i])
                        : std::abs(std::abs(values[i]) - std::abs(previous[i]));
          change = std::max(change, delta);
        }
        if (change < opts.tolerance) return values;
      }
      previous = std::move(values);
    }
    q = Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ() *
        Eigen::MatrixXd::Identity(dim, p);
  }
  throw ConvergenceError("subspace iteration for the second eigenvalue",
                         change);
}

SecondEigenvalue DenseSecond(const SparseMatrix& m, SpectrumKind kind) {
  const Eigen::MatrixXd dense(m);
  const int64_t n = dense.rows();
  SecondEigenvalue out;
  if (kind == SpectrumKind::kAdjacency) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense,
                                                      Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();  // ascending
    out.signed_value = ev[n - 2];
    out.modulus = std::max(std::abs(ev[0]), std::abs(ev[n - 2]));
    return out;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                       es.eigenvalues().data() + n);
  auto perron = std::min_element(ev.begin(), ev.end(), [](auto a, auto b) {
    return std::abs(a - 1.0) < std::abs(b - 1.0);
  });
  ev.erase(perron);
  out.signed_value = -std::numeric_limits<double>::infinity();
  for (auto z : ev) {
    out.signed_value = std::max(out.signed_value, z.real());
    out.modulus = std::max(out.modulus, std::abs(z));
  }
  return out;
}

}  // namespace

SecondEigenvalue ComputeSecondEigenvalue(const SparseMatrix& m,
                                         SpectrumKind kind,
                                         const EigenOptions& options) {
  const int64_t n = m.rows();
  if (n < 2 || m.cols() != n) {
    throw std::invalid_argument("second eigenvalue needs a square matrix of "
                                "dimension >= 2");
  }
  if (n < options.dense_cutoff) return DenseSecond(m, kind);

  SecondEigenvalue out;
  out.dense = false;
  if (kind == SpectrumKind::kAdjacency) {
    // Shift by an upper bound on the spectral radius so the wanted end of the
    // spectrum dominates.
    double shift = 0;
    for (int64_t r = 0; r < n; ++r) {
      double s = 0;
      for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
      shift = std::max(shift, s);
    }
    auto top = SubspaceRitzValues(
        [&](const Eigen::MatrixXd& q) -> Eigen::MatrixXd {
          return m * q + shift * q;
        },
        n, true, 2, options);
    auto bottom = SubspaceRitzValues(
        [&](const Eigen::MatrixXd& q) -> Eigen::MatrixXd {
          return shift * q - m * q;
        },
        n, true, 1, options);
    out.signed_value = top[1].real() - shift;
    const double smallest = shift - bottom[0].real();
    out.modulus = std::max(std::abs(out.signed_value), std::abs(smallest));
    return out;
  }
  // Deflate the Perron pair: M - 1 pi^T has the spectrum of M with 1 -> 0.
  const std::vector<double> pi_vec = StationaryDistribution(m);
  const Eigen::Map<const Eigen::VectorXd> pi(pi_vec.data(), n);
  auto values = SubspaceRitzValues(
      [&](const Eigen::MatrixXd& q) -> Eigen::MatrixXd {
        Eigen::MatrixXd z = m * q;
        z.rowwise() -= pi.transpose() * q;
        return z;
      },
      n, false, 1, options);
  out.modulus = std::abs(values[0]);
  out.signed_value = -std::numeric_limits<double>::infinity();
  for (auto z : values) out.signed_value = std::max(out.signed_value, z.real());
  return out;
}

std::string_view MixingRegimeName(MixingRegime regime) {
  switch (regime) {
    case MixingRegime::kAboveThreshold:
      return "above_threshold";
    case MixingRegime::kBelowThreshold:
      return "below_threshold";
    case MixingRegime::kEmpirical:
      return "empirical";
  }
  return "unknown";
}

double BacktrackingRate(double lambda2, int d) { return lambda2 / d; }

double NonBacktrackingRate(double lambda2, int d) {
  const double disc = lambda2 * lambda2 - 4.0 * (d - 1);
  // Rounding at the threshold itself must not flip branches or leave a
  // sqrt(eps) residue.
  if (disc <= 1e-12 * 4.0 * (d - 1)) {
    return 1.0 / std::sqrt(static_cast<double>(d - 1));
  }
  return (lambda2 + std::sqrt(disc)) / (2.0 * (d - 1));
}

MixingReport MixingRates(const Graph& g, bool require_regular,
                         const MixingOptions& options) {
  MixingReport report;
  const int d = RegularDegree(g);
  const SecondEigenvalue adj =
      ComputeSecondEigenvalue(AdjacencyMatrix(g), SpectrumKind::kAdjacency,
                              options.eigen);
  report.lambda2 = adj.signed_value;
  report.lambda2_modulus = adj.modulus;

  if (d >= 2) {
    report.degree = d;
    report.rho = BacktrackingRate(report.lambda2, d);
    report.rho_modulus = BacktrackingRate(report.lambda2_modulus, d);
    report.rho_nbt = NonBacktrackingRate(report.lambda2, d);
    report.ratio = report.rho_nbt / report.rho;
    const double floor_ratio = d / (2.0 * (d - 1));
    if (report.lambda2 >= 2.0 * std::sqrt(static_cast<double>(d - 1))) {
      report.regime = MixingRegime::kAboveThreshold;
      report.ratio_lower = floor_ratio;
      report.ratio_upper = 1.0;
    } else {
      report.regime = MixingRegime::kBelowThreshold;
      report.ratio_lower = report.ratio_upper = floor_ratio;
    }
    return report;
  }
  if (require_regular) {
    throw std::invalid_argument(
        "graph is not d-regular with d >= 2 (degrees range over [" +
        std::to_string(g.MinDegree()) + ", " + std::to_string(g.MaxDegree()) +
        "])");
  }
  const MixingCurve vertex = MeasureMixingEmpirical(
      BuildVertexTransition(g).matrix, options.horizon, options.curve);
  const MixingCurve edge = MeasureMixingEmpirical(
      BuildEdgeTransition(g, EdgeWalkMode::kBegrudging).matrix,
      options.horizon, options.curve);
  report.rho = report.rho_modulus = vertex.fitted_rate;
  report.rho_nbt = edge.fitted_rate;
  report.ratio = report.rho_nbt / report.rho;
  report.regime = MixingRegime::kEmpirical;
  return report;
}

MixingCurve MeasureMixingEmpirical(const SparseMatrix& m, int horizon,
                                   const MixingCurveOptions& options) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  PowerIterationOptions pi_options;
  pi_options.tolerance = 1e-14;
  const std::vector<double> pi_vec = StationaryDistribution(m, pi_options);
  const int64_t n = m.rows();
  const Eigen::Map<const Eigen::RowVectorXd> pi(pi_vec.data(), n);

  std::vector<int64_t> starts(n);
  std::iota(starts.begin(), starts.end(), 0);
  if (n > options.max_starts) {
    Rng rng(options.seed);
    std::shuffle(starts.begin(), starts.end(), rng);
    starts.resize(options.max_starts);
    std::sort(starts.begin(), starts.end());
  }
  const int64_t s = static_cast<int64_t>(starts.size());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(s, n);
  for (int64_t i = 0; i < s; ++i) x(i, starts[i]) = 1.0;

  MixingCurve curve;
  for (int t = 1; t <= horizon; ++t) {
    Eigen::MatrixXd next = x * m;
    x.swap(next);
    const double dev = (x.rowwise() - pi).cwiseAbs().maxCoeff();
    if (dev < options.floor) break;
    curve.deviation.push_back(dev);
    curve.rate.push_back(std::pow(dev, 1.0 / t));
  }
  const int64_t usable = static_cast<int64_t>(curve.deviation.size());
  if (usable == 0) return curve;
  if (usable < 4) {
    curve.fitted_rate = curve.rate.back();
    return curve;
  }
  // Least squares of log deviation against t over the second half.
  const int64_t begin = usable / 2;
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double count = static_cast<double>(usable - begin);
  for (int64_t i = begin; i < usable; ++i) {
    const double t = static_cast<double>(i + 1);
    const double y = std::log(curve.deviation[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double slope = (count * sty - st * sy) / (count * stt - st * st);
  curve.fitted_rate = std::exp(slope);
  return curve;
}

}  // namespace vecnbt
