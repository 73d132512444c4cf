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

#ifndef VECNBT_SPECTRAL_H_
#define VECNBT_SPECTRAL_H_

#include <Eigen/SparseCore>
#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vecnbt/graph.h"

namespace vecnbt {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int64_t>;

// Raised when an iterative solver exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) +
                           ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// P = D^-1 A over nodes. Rows of isolated nodes are all zero.
struct VertexTransitionMatrix {
  SparseMatrix matrix;
  std::vector<char> zero_rows;
};

VertexTransitionMatrix BuildVertexTransition(const Graph& g);

enum class EdgeWalkMode { kNonBacktracking, kBegrudging };

// Transition matrix over the 2m directed edges, indexed as in Graph.
// From (u, v) the walk moves to (v, y), y != u, with probability
// 1/(d_v - 1); in begrudging mode a dangling v sends (u, v) back to (v, u).
struct EdgeTransitionMatrix {
  SparseMatrix matrix;
  EdgeWalkMode mode;
};

// Throws std::invalid_argument naming the first node below the required
// minimum degree (2 for non-backtracking, 1 for begrudging).
EdgeTransitionMatrix BuildEdgeTransition(const Graph& g, EdgeWalkMode mode);

struct LaplacianSet {
  SparseMatrix combinatorial;  // D - A
  SparseMatrix symmetric;      // I - D^-1/2 A D^-1/2
  SparseMatrix random_walk;    // I - D^-1 A
};

// Isolated nodes get D^-1/2 = D^-1 = 0, so their diagonal entries are 1.
LaplacianSet BuildLaplacians(const Graph& g);

SparseMatrix AdjacencyMatrix(const Graph& g);

struct StochasticityCheck {
  bool ok = false;
  double max_row_deviation = 0;
  double max_column_deviation = 0;
  double max_deviation() const {
    return std::max(max_row_deviation, max_column_deviation);
  }
};

inline constexpr double kStochasticTolerance = 1e-12;

// Row and column sums all within `tol` of 1.
StochasticityCheck CheckDoublyStochastic(const SparseMatrix& m,
                                         double tol = kStochasticTolerance);
// Row sums only; rows flagged in `skip_rows` (if non-empty) are ignored.
StochasticityCheck CheckRowStochastic(const SparseMatrix& m,
                                      const std::vector<char>& skip_rows = {},
                                      double tol = kStochasticTolerance);

struct Ergodicity {
  bool irreducible = false;
  bool aperiodic = false;
  // gcd of cycle lengths of the positive-entry digraph; 0 if not irreducible.
  int64_t period = 0;
  bool ergodic() const { return irreducible && aperiodic; }
};

Ergodicity CheckErgodicity(const SparseMatrix& m);

struct PowerIterationOptions {
  double tolerance = 1e-10;  // L1 residual |x M - x|
  int64_t max_iterations = 2'000'000;
};

// Left eigenvector for eigenvalue 1 normalized to sum 1, by power iteration.
// Throws std::invalid_argument for a non-ergodic chain and ConvergenceError
// when the residual target is not met.
std::vector<double> StationaryDistribution(
    const SparseMatrix& m, const PowerIterationOptions& options = {});

// L1 norm of x M - x.
double StationaryResidual(const SparseMatrix& m, const std::vector<double>& x);

enum class SpectrumKind {
  kAdjacency,   // symmetric; Perron root is the largest eigenvalue
  kTransition,  // general; Perron root is 1
};

struct SecondEigenvalue {
  // Largest real part among the eigenvalues other than the Perron root: the
  // signed second-largest eigenvalue for symmetric or real spectra.
  double signed_value = 0;
  // Largest modulus among the eigenvalues other than the Perron root.
  double modulus = 0;
  bool dense = true;
};

struct EigenOptions {
  // Dense solver below this dimension, subspace iteration at or above it.
  int64_t dense_cutoff = 2000;
  int block_size = 8;
  double tolerance = 1e-8;
  int64_t max_iterations = 200'000;
  uint64_t seed = 1;
};

// Throws std::invalid_argument for dimension < 2 and ConvergenceError when the
// iterative path fails.
SecondEigenvalue ComputeSecondEigenvalue(const SparseMatrix& m,
                                         SpectrumKind kind,
                                         const EigenOptions& options = {});

enum class MixingRegime {
  kAboveThreshold,  // 2 sqrt(d - 1) <= lambda2 <= d
  kBelowThreshold,  // lambda2 < 2 sqrt(d - 1); NBT rate is complex, use modulus
  kEmpirical,       // non-regular graph, rates measured from the chains
};

std::string_view MixingRegimeName(MixingRegime regime);

struct MixingReport {
  int degree = -1;  // -1 if not regular
  double lambda2 = 0;          // signed second-largest adjacency eigenvalue
  double lambda2_modulus = 0;  // second-largest adjacency modulus
  double rho = 0;              // backtracking rate, lambda2 / d
  double rho_modulus = 0;      // lambda2_modulus / d
  double rho_nbt = 0;          // non-backtracking rate
  double ratio = 0;            // rho_nbt / rho
  MixingRegime regime = MixingRegime::kEmpirical;
  // Bounds on ratio for the regime: [d / (2(d - 1)), 1] above threshold.
  double ratio_lower = 0;
  double ratio_upper = 0;
};

// Backtracking rate lambda2 / d for a d-regular graph.
double BacktrackingRate(double lambda2, int d);
// (lambda2 + sqrt(lambda2^2 - 4(d - 1))) / (2(d - 1)); when the root is
// imaginary returns the modulus 1 / sqrt(d - 1).
double NonBacktrackingRate(double lambda2, int d);

struct MixingCurveOptions {
  // Start rows used for the max over u; all rows when dim <= max_starts.
  int64_t max_starts = 1000;
  // Deviations below this floor are dominated by the error in pi and end
  // the curve.
  double floor = 1e-9;
  uint64_t seed = 1;
};

struct MixingOptions {
  EigenOptions eigen;
  MixingCurveOptions curve;
  int horizon = 3000;
};

// With require_regular, throws std::invalid_argument unless g is d-regular
// with d >= 2. Regular graphs get the analytic rates from the second
// adjacency eigenvalue. Non-regular graphs (allowed only without
// require_regular) get fitted decay rates of the vertex chain (rho) and the
// begrudging edge chain (rho_nbt).
MixingReport MixingRates(const Graph& g, bool require_regular,
                         const MixingOptions& options = {});

struct MixingCurve {
  // deviation[t - 1] = max_{u, v} |M^t(u, v) - pi(v)|.
  std::vector<double> deviation;
  // deviation^(1/t).
  std::vector<double> rate;
  // exp(slope) of a least-squares fit of log deviation over the last half
  // of the curve.
  double fitted_rate = 0;
};

// Throws std::invalid_argument for a non-ergodic chain.
MixingCurve MeasureMixingEmpirical(const SparseMatrix& m, int horizon,
                                   const MixingCurveOptions& options = {});

}  // namespace vecnbt

#endif  // VECNBT_SPECTRAL_H_
