// Copyright 2026 The antisym Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANTISYM_CP_RANK_HPP
#define ANTISYM_CP_RANK_HPP

// CP fitting by alternating least squares, a heuristic rank search, and the
// analytic CP-rank bounds for the determinant tensor and for nonzero
// antisymmetric tensors.
//
// A failed fit at rank p is not a proof that the rank exceeds p: border-rank
// effects let a tensor be approximated arbitrarily well at a rank below its
// true rank, and ALS can stall in swamps. Every RankReport therefore carries
// the analytic bounds separately and is flagged heuristic.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>

#include "antisym/tensor_core.hpp"

namespace antisym {

struct AlsOptions {
  int max_sweeps = 2000;
  double rel_tol = 1e-9;      // stop once ||X - Y||_F / ||X||_F falls below this
  double stall_tol = 1e-12;   // stop once a sweep improves the residual by less than this
  int restarts = 16;
  std::uint64_t seed = 0x5eed;
  double regularization = 1e-12;  // ridge, relative to the mean Gram diagonal

  /// Throws Error(InvalidArgument) on non-positive tolerances or restarts < 1.
  void validate() const;
};

struct AlsFit {
  CpDecomposition cp;
  double relative_residual = 0.0;
  int restart = 0;        // index of the winning restart
  int restarts_used = 0;  // restarts actually run (stops early once rel_tol is met)
  int sweeps = 0;         // sweeps taken by the winning restart
};

/// Best-of-restarts rank-p fit. Factors start i.i.d. complex standard
/// Gaussian; the lowest final residual wins, ties to the lowest restart
/// index. Deterministic for a fixed seed. p = 0 returns the empty
/// decomposition with residual 1 (or 0 for the zero tensor).
AlsFit als_fit(const DenseTensor& x, int rank, const AlsOptions& opts = {});

/// ALS from a given starting decomposition (no restarts).
AlsFit als_refine(const DenseTensor& x, CpDecomposition start, const AlsOptions& opts = {});

/// ||X - dense_from_cp(cp)||_F / ||X||_F.
double relative_residual(const DenseTensor& x, const CpDecomposition& cp);

struct RankBounds {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
};

/// binom(N, floor(N/2)) <= rank(E) <= floor(N! (5/6)^floor(N/3)), in exact
/// integer arithmetic. Valid for 1 <= N <= 20; larger N throws Overflow.
RankBounds det_rank_bounds(int order);

/// Bounds for any nonzero antisymmetric tensor of order N over C^K:
/// binom(N, floor(N/2)) <= rank <= floor(N! binom(K,N) (5/6)^floor(N/3)).
/// K < N throws Error(Trivial): only the zero tensor is antisymmetric there.
RankBounds antisym_rank_bounds(int order, int dim);

struct AsymptoticBound {
  std::uint64_t exact = 0;   // binom(N, floor(N/2))
  double asymptotic = 0.0;   // 2^N / sqrt(N)
  double ratio() const { return static_cast<double>(exact) / asymptotic; }
};
AsymptoticBound asymptotic_lower_bound(int order);

struct RankReport {
  std::optional<int> estimated_rank;     // empty: nothing <= p_max met rel_tol
  std::map<int, double> residuals;       // rank -> best relative residual
  std::map<int, int> restarts_used;      // rank -> restarts run
  std::uint64_t lower_bound = 1;
  std::uint64_t upper_bound = 0;
  bool antisymmetric = false;
  bool heuristic = true;
};

/// Fits ranks from the analytic lower bound (antisymmetric inputs with
/// K >= N) or from 1 up to p_max, stopping at the first rank whose best
/// residual meets opts.rel_tol. Each rank after the first also tries a warm
/// start from the previous best fit plus a small random term, which keeps the
/// best residuals non-increasing in rank.
RankReport rank_search(const DenseTensor& x, int p_max, const AlsOptions& opts = {});

/// CSV block:
///   # lower=<int> upper=<int> heuristic=true
///   # estimated_rank=<int|not_found>
///   rank,best_residual,restarts_used
void write_rank_report(std::ostream& out, const RankReport& report);

}  // namespace antisym

#endif  // ANTISYM_CP_RANK_HPP
