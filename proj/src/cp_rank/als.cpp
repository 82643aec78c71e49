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

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "antisym/cp_rank.hpp"
#include "antisym/error.hpp"

namespace antisym {

namespace {

using Factor = Eigen::MatrixXcd;  // dim x rank

constexpr double kResidualFloor = 1e-15;

/// Flat entries of X together with their 0-based coordinates, laid out so
/// that each sweep walks memory linearly.
struct IndexedTensor {
  const DenseTensor& x;
  std::vector<int> coords;  // size() * order, 0-based
  double norm;

  explicit IndexedTensor(const DenseTensor& t) : x(t), norm(t.frobenius_norm()) {
    const auto n = static_cast<std::size_t>(t.order());
    coords.resize(t.size() * n);
    std::vector<int> idx(n);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      t.unravel(flat, idx);
      for (std::size_t j = 0; j < n; ++j) coords[flat * n + j] = idx[j] - 1;
    }
  }

  int order() const { return x.order(); }
  const int* at(std::size_t flat) const { return coords.data() + flat * static_cast<std::size_t>(order()); }
};

std::vector<Factor> to_factors(const CpDecomposition& cp) {
  const int p = cp.rank();
  std::vector<Factor> a;
  for (int j = 0; j < cp.order(); ++j) {
    Factor f(static_cast<Eigen::Index>(cp.dims[static_cast<std::size_t>(j)]), p);
    for (int r = 0; r < p; ++r)
      for (Eigen::Index i = 0; i < f.rows(); ++i)
        f(i, r) = cp.terms[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    a.push_back(std::move(f));
  }
  return a;
}

CpDecomposition to_cp(const std::vector<Factor>& a, const std::vector<std::size_t>& dims) {
  CpDecomposition cp(dims);
  const Eigen::Index p = a.empty() ? 0 : a.front().cols();
  for (Eigen::Index r = 0; r < p; ++r) {
    std::vector<ComplexVector> term;
    for (const Factor& f : a) term.emplace_back(f.col(r).data(), f.col(r).data() + f.rows());
    cp.terms.push_back(std::move(term));
  }
  return cp;
}

double residual_of(const IndexedTensor& t, const std::vector<Factor>& a) {
  const int n = t.order();
  const Eigen::Index p = a.front().cols();
  double s = 0.0;
  for (std::size_t flat = 0; flat < t.x.size(); ++flat) {
    const int* c = t.at(flat);
    Complex y{};
    for (Eigen::Index r = 0; r < p; ++r) {
      Complex prod = 1.0;
      for (int j = 0; j < n; ++j) prod *= a[static_cast<std::size_t>(j)](c[j], r);
      y += prod;
    }
    s += std::norm(t.x.data()[flat] - y);
  }
  return std::sqrt(s) / t.norm;
}

/// M(i, r) = sum over entries with coordinate i in mode j of
/// X(idx) * prod_{k != j} conj(A_k(idx_k, r)).
Factor mttkrp(const IndexedTensor& t, const std::vector<Factor>& a, int mode) {
  const int n = t.order();
  const Eigen::Index p = a.front().cols();
  Factor m = Factor::Zero(static_cast<Eigen::Index>(t.x.dim(mode)), p);
  for (std::size_t flat = 0; flat < t.x.size(); ++flat) {
    const Complex v = t.x.data()[flat];
    if (v == Complex{}) continue;
    const int* c = t.at(flat);
    for (Eigen::Index r = 0; r < p; ++r) {
      Complex prod = v;
      for (int k = 0; k < n; ++k)
        if (k != mode) prod *= std::conj(a[static_cast<std::size_t>(k)](c[k], r));
      m(c[mode], r) += prod;
    }
  }
  return m;
}

void update_mode(const IndexedTensor& t, std::vector<Factor>& a, int mode, double ridge) {
  const Eigen::Index p = a.front().cols();
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Ones(p, p);
  for (int k = 0; k < t.order(); ++k)
    if (k != mode) gram = gram.cwiseProduct(a[static_cast<std::size_t>(k)].adjoint() * a[static_cast<std::size_t>(k)]);
  const double lambda = ridge * std::max(gram.diagonal().real().mean(), 1e-300);
  gram.diagonal().array() += lambda;
  // Ridge centred on the current iterate: (G + lambda I) A^T = M^T + lambda A_old^T.
  // Guards rank-deficient Khatri-Rao systems without biasing fixed points.
  const Eigen::MatrixXcd rhs = mttkrp(t, a, mode).transpose() + lambda * a[static_cast<std::size_t>(mode)].transpose();
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  Eigen::MatrixXcd sol;
  if (llt.info() == Eigen::Success) {
    sol = llt.solve(rhs);
  } else {
    sol = gram.completeOrthogonalDecomposition().solve(rhs);
  }
  if (!sol.allFinite())
    fail(ErrorKind::NumericFailure, "ALS: least-squares solve for mode " + std::to_string(mode + 1) +
                                        " broke down after regularization");
  a[static_cast<std::size_t>(mode)] = sol.transpose();
}

/// Equalize factor norms within each term; leaves the tensor unchanged.
void balance(std::vector<Factor>& a) {
  const Eigen::Index p = a.front().cols();
  const double n = static_cast<double>(a.size());
  for (Eigen::Index r = 0; r < p; ++r) {
    double log_sum = 0.0;
    bool zero = false;
    for (const Factor& f : a) {
      const double nr = f.col(r).norm();
      if (nr == 0.0) zero = true;
      log_sum += std::log(nr);
    }
    if (zero) continue;
    const double target = std::exp(log_sum / n);
    for (Factor& f : a) f.col(r) *= target / f.col(r).norm();
  }
}

struct RunResult {
  std::vector<Factor> factors;
  double residual;
  int sweeps;
};

RunResult run_als(const IndexedTensor& t, std::vector<Factor> a, const AlsOptions& opts) {
  RunResult best{a, residual_of(t, a), 0};
  double prev = best.residual;
  // rel_tol decides success across restarts and ranks; a single run keeps
  // polishing until it stalls so that exact fits reach rounding level.
  for (int sweep = 1; sweep <= opts.max_sweeps && best.residual > kResidualFloor; ++sweep) {
    for (int j = 0; j < t.order(); ++j) update_mode(t, a, j, opts.regularization);
    balance(a);
    const double res = residual_of(t, a);
    if (!std::isfinite(res)) fail(ErrorKind::NumericFailure, "ALS: residual became non-finite");
    if (res < best.residual) best = RunResult{a, res, sweep};
    if (prev - res < opts.stall_tol) break;
    prev = res;
  }
  return best;
}

std::vector<Factor> random_factors(const DenseTensor& x, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::vector<Factor> a;
  for (int j = 0; j < x.order(); ++j) {
    Factor f(static_cast<Eigen::Index>(x.dim(j)), rank);
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = Complex(g(rng), g(rng));
    a.push_back(std::move(f));
  }
  return a;
}

std::mt19937_64 restart_rng(std::uint64_t seed, int rank, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rank), static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

void check_nonzero(const DenseTensor& x) {
  if (x.frobenius_norm() == 0.0) fail(ErrorKind::InvalidArgument, "ALS: target tensor is zero");
}

}  // namespace

void AlsOptions::validate() const {
  if (max_sweeps < 1 || !(rel_tol > 0) || !(stall_tol > 0) || !(regularization > 0) || restarts < 1)
    fail(ErrorKind::InvalidArgument, "AlsOptions: tolerances must be positive and restarts >= 1");
}

double relative_residual(const DenseTensor& x, const CpDecomposition& cp) {
  const double nx = x.frobenius_norm();
  const double diff = (x - dense_from_cp(cp)).frobenius_norm();
  return nx == 0.0 ? diff : diff / nx;
}

AlsFit als_refine(const DenseTensor& x, CpDecomposition start, const AlsOptions& opts) {
  opts.validate();
  check_nonzero(x);
  if (start.dims != x.dims()) fail(ErrorKind::DimensionMismatch, "als_refine: start dims differ from tensor dims");
  start.validate();
  if (start.rank() == 0) return AlsFit{start, 1.0, 0, 1, 0};
  const IndexedTensor t(x);
  RunResult r = run_als(t, to_factors(start), opts);
  return AlsFit{to_cp(r.factors, x.dims()), r.residual, 0, 1, r.sweeps};
}

AlsFit als_fit(const DenseTensor& x, int rank, const AlsOptions& opts) {
  opts.validate();
  if (rank < 0) fail(ErrorKind::InvalidArgument, "als_fit: rank must be >= 0");
  if (rank == 0) {
    CpDecomposition empty(x.dims());
    return AlsFit{empty, x.frobenius_norm() == 0.0 ? 0.0 : 1.0, 0, 0, 0};
  }
  check_nonzero(x);
  const IndexedTensor t(x);
  AlsFit best;
  best.relative_residual = std::numeric_limits<double>::infinity();
  int used = 0;
  for (int restart = 0; restart < opts.restarts; ++restart) {
    auto rng = restart_rng(opts.seed, rank, restart);
    RunResult r = run_als(t, random_factors(x, rank, rng), opts);
    ++used;
    if (r.residual < best.relative_residual) {
      best.cp = to_cp(r.factors, x.dims());
      best.relative_residual = r.residual;
      best.restart = restart;
      best.sweeps = r.sweeps;
    }
    if (best.relative_residual <= opts.rel_tol) break;
  }
  best.restarts_used = used;
  return best;
}

RankReport rank_search(const DenseTensor& x, int p_max, const AlsOptions& opts) {
  opts.validate();
  if (p_max < 1) fail(ErrorKind::InvalidArgument, "rank_search: p_max must be >= 1");
  check_nonzero(x);
  RankReport report;
  const int n = x.order();
  const int dim = static_cast<int>(x.dim(0));
  report.antisymmetric = x.equal_dims() && dim >= n &&
                         antisymmetry_violation(x).relative_error <= kAntisymmetryTolerance;
  if (report.antisymmetric) {
    const RankBounds b = antisym_rank_bounds(n, dim);
    report.lower_bound = b.lower;
    report.upper_bound = b.upper;
  } else {
    // Generic bound: the product of all but the largest mode dimension.
    std::uint64_t prod = 1;
    std::size_t largest = 0;
    for (std::size_t d : x.dims()) {
      prod *= d;
      largest = std::max(largest, d);
    }
    report.lower_bound = 1;
    report.upper_bound = prod / largest;
  }

  const IndexedTensor t(x);
  std::optional<CpDecomposition> previous;
  double previous_residual = 1.0;
  const int first = static_cast<int>(std::min<std::uint64_t>(report.lower_bound, static_cast<std::uint64_t>(p_max)));
  for (int p = first; p <= p_max; ++p) {
    double best = std::numeric_limits<double>::infinity();
    int used = 0;
    if (previous) {
      // The previous fit padded with a zero term is a valid rank-p candidate.
      best = previous_residual;
      auto rng = restart_rng(opts.seed ^ 0xa5a5a5a5ULL, p, 0);
      std::vector<Factor> a = to_factors(*previous);
      std::vector<Factor> extra = random_factors(x, 1, rng);
      const double scale = 1e-3 * std::pow(t.norm, 1.0 / n);
      for (std::size_t j = 0; j < a.size(); ++j) {
        a[j].conservativeResize(Eigen::NoChange, p);
        a[j].col(p - 1) = scale * extra[j].col(0);
      }
      RunResult r = run_als(t, std::move(a), opts);
      ++used;
      if (r.residual < best) {
        best = r.residual;
        previous = to_cp(r.factors, x.dims());
      } else {
        previous->terms.push_back({});
        for (std::size_t j = 0; j < x.dims().size(); ++j) previous->terms.back().emplace_back(x.dims()[j]);
      }
    }
    if (best > opts.rel_tol) {
      const AlsFit fit = als_fit(x, p, opts);
      used += fit.restarts_used;
      if (fit.relative_residual < best) {
        best = fit.relative_residual;
        previous = fit.cp;
      }
    }
    report.residuals[p] = best;
    report.restarts_used[p] = used;
    previous_residual = best;
    if (best <= opts.rel_tol) {
      report.estimated_rank = p;
      break;
    }
  }
  return report;
}

}  // namespace antisym
