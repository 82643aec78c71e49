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


#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "antisym/error.hpp"
#include "antisym/tpf_bridge.hpp"

namespace antisym {

namespace {

// phi[j][k-1] = phi_k(r_j) for one point.
std::vector<ComplexVector> basis_values(const FunctionBasis& basis, const Point& r) {
  std::vector<ComplexVector> phi(r.size(), ComplexVector(static_cast<std::size_t>(basis.size)));
  for (std::size_t j = 0; j < r.size(); ++j)
    for (int k = 1; k <= basis.size; ++k) phi[j][static_cast<std::size_t>(k - 1)] = basis.evaluate(k, r[j]);
  return phi;
}

Complex eval_cp(const CpDecomposition& cp, const std::vector<ComplexVector>& phi) {
  Complex sum{};
  for (const auto& term : cp.terms) {
    Complex prod = 1.0;
    for (std::size_t j = 0; j < term.size(); ++j) {
      Complex psi{};
      for (std::size_t k = 0; k < phi[j].size(); ++k) psi += term[j][k] * phi[j][k];
      prod *= psi;
    }
    sum += prod;
  }
  return sum;
}

Complex eval_dense(const DenseTensor& x, const std::vector<ComplexVector>& phi) {
  const int n = x.order();
  std::vector<int> idx(static_cast<std::size_t>(n));
  Complex sum{};
  for (std::size_t flat = 0; flat < x.size(); ++flat) {
    const Complex c = x.data()[flat];
    if (c == Complex{}) continue;
    x.unravel(flat, idx);
    Complex prod = c;
    for (int j = 0; j < n; ++j)
      prod *= phi[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(j)] - 1)];
    sum += prod;
  }
  return sum;
}

void require_modes(const std::vector<std::size_t>& dims, int order, int size, const char* what) {
  if (static_cast<int>(dims.size()) != order)
    fail(ErrorKind::DimensionMismatch, std::string(what) + ": representation order differs from N");
  for (std::size_t d : dims)
    if (d != static_cast<std::size_t>(size))
      fail(ErrorKind::DimensionMismatch, std::string(what) + ": mode dim " + std::to_string(d) +
                                             " != basis size " + std::to_string(size));
}

}  // namespace

void FunctionBasis::validate() const {
  if (size < 1) fail(ErrorKind::InvalidArgument, "basis size must be >= 1");
  if (!evaluate) fail(ErrorKind::InvalidArgument, "basis has no evaluation callable");
  if (!(domain.lo < domain.hi)) fail(ErrorKind::InvalidArgument, "basis domain is empty");
}

FunctionBasis monomial_basis(int size, double lo, double hi) {
  FunctionBasis b{size, [](int k, double x) { return Complex(std::pow(x, k - 1), 0.0); },
                  Domain{lo, hi, "monomial"}};
  b.validate();
  return b;
}

FunctionBasis indicator_basis(int size, double lo, double hi) {
  const double width = (hi - lo) / size;
  FunctionBasis b{size,
                  [=](int k, double x) {
                    int cell = static_cast<int>(std::floor((x - lo) / width));
                    if (x == hi) cell = size - 1;
                    return Complex(cell == k - 1 ? 1.0 : 0.0, 0.0);
                  },
                  Domain{lo, hi, "indicator"}};
  b.validate();
  return b;
}

TpfFunction::TpfFunction(int order, FunctionBasis basis, std::optional<CpDecomposition> cp,
                         std::optional<DenseTensor> coeffs)
    : order_(order), basis_(std::move(basis)), cp_(std::move(cp)), coeffs_(std::move(coeffs)) {
  if (order_ < 1 || order_ > kMaxOrder) fail(ErrorKind::InvalidArgument, "TPF order must be in 1..8");
  basis_.validate();
  if (!cp_ && !coeffs_) fail(ErrorKind::InvalidArgument, "TPF needs a CP or a dense representation");
  if (cp_) {
    cp_->validate();
    require_modes(cp_->dims, order_, basis_.size, "TPF");
  }
  if (coeffs_) require_modes(coeffs_->dims(), order_, basis_.size, "TPF");
  if (cp_ && coeffs_) {
    const DenseTensor x = dense_from_cp(*cp_);
    const double scale = std::max(1.0, coeffs_->max_abs());
    if (max_abs_diff(x, *coeffs_) > kRepresentationTolerance * scale)
      fail(ErrorKind::InvalidArgument, "TPF: CP and dense representations disagree");
  }
}

DenseTensor tpf_to_tensor(const TpfFunction& f) {
  if (!f.cp()) fail(ErrorKind::InvalidArgument, "tpf_to_tensor: TPF has no CP representation");
  return dense_from_cp(*f.cp());
}

TpfFunction tensor_to_tpf(const CpDecomposition& cp, const FunctionBasis& basis) {
  cp.validate();
  if (cp.order() < 1) fail(ErrorKind::DimensionMismatch, "tensor_to_tpf: decomposition has no modes");
  require_modes(cp.dims, cp.order(), basis.size, "tensor_to_tpf");
  return TpfFunction(cp.order(), basis, cp, std::nullopt);
}

ComplexVector evaluate_tpf(const TpfFunction& f, const std::vector<Point>& points) {
  ComplexVector out;
  out.reserve(points.size());
  for (const Point& r : points) {
    if (static_cast<int>(r.size()) != f.order())
      fail(ErrorKind::DimensionMismatch, "evaluate_tpf: point has " + std::to_string(r.size()) +
                                             " coordinates, expected " + std::to_string(f.order()));
    const auto phi = basis_values(f.basis(), r);
    out.push_back(f.cp() ? eval_cp(*f.cp(), phi) : eval_dense(*f.coeffs(), phi));
  }
  return out;
}

TpfFunction antisymmetrize_tpf(const TpfFunction& f) {
  std::optional<CpDecomposition> cp;
  std::optional<DenseTensor> coeffs;
  if (f.cp()) cp = antisymmetrize_cp(*f.cp());
  if (f.coeffs()) coeffs = antisymmetrize(*f.coeffs());
  return TpfFunction(f.order(), f.basis(), std::move(cp), std::move(coeffs));
}

TpfFunction slater_tpf(const std::vector<ComplexVector>& orbitals, const FunctionBasis& basis) {
  basis.validate();
  const int n = static_cast<int>(orbitals.size());
  if (n < 1 || n > kMaxOrder) fail(ErrorKind::InvalidArgument, "slater_tpf: need 1..8 orbitals");
  if (basis.size < n)
    fail(ErrorKind::InvalidArgument, "slater_tpf: K = " + std::to_string(basis.size) + " < N = " +
                                         std::to_string(n) + ", no nonzero determinant exists");
  for (const auto& o : orbitals)
    if (o.size() != static_cast<std::size_t>(basis.size))
      fail(ErrorKind::DimensionMismatch, "slater_tpf: orbital length differs from basis size");
  CpDecomposition cp(std::vector<std::size_t>(static_cast<std::size_t>(n), static_cast<std::size_t>(basis.size)));
  for (const Permutation& p : all_permutations(n)) {
    std::vector<ComplexVector> factors;
    factors.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) factors.push_back(orbitals[static_cast<std::size_t>(p(j) - 1)]);
    for (Complex& z : factors.front()) z *= static_cast<double>(p.sign);
    cp.terms.push_back(std::move(factors));
  }
  return TpfFunction(n, basis, std::move(cp), std::nullopt);
}

IndependenceCheck gram_independence_check(const FunctionBasis& basis, int order,
                                          const std::vector<Point>& samples) {
  basis.validate();
  if (order < 1 || order > kMaxOrder) fail(ErrorKind::InvalidArgument, "gram_independence_check: N must be in 1..8");
  std::size_t cols = 1;
  for (int j = 0; j < order; ++j) {
    cols *= static_cast<std::size_t>(basis.size);
    if (cols > kMaxProductFunctions)
      fail(ErrorKind::TooLarge, "gram_independence_check: K^N exceeds " + std::to_string(kMaxProductFunctions));
  }
  if (samples.size() < cols)
    fail(ErrorKind::InvalidArgument, "gram_independence_check: " + std::to_string(samples.size()) +
                                         " samples < K^N = " + std::to_string(cols));
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(cols));
  std::vector<int> idx(static_cast<std::size_t>(order));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (static_cast<int>(samples[s].size()) != order)
      fail(ErrorKind::DimensionMismatch, "gram_independence_check: sample has wrong coordinate count");
    const auto phi = basis_values(basis, samples[s]);
    for (std::size_t c = 0; c < cols; ++c) {
      // Last coordinate fastest, matching DenseTensor layout.
      std::size_t rem = c;
      Complex prod = 1.0;
      for (int j = order - 1; j >= 0; --j) {
        const std::size_t k = rem % static_cast<std::size_t>(basis.size);
        rem /= static_cast<std::size_t>(basis.size);
        prod *= phi[static_cast<std::size_t>(j)][k];
      }
      m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c)) = prod;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  IndependenceCheck out;
  out.max_singular_value = sv.maxCoeff();
  out.min_singular_value = sv.minCoeff();
  out.independent = out.max_singular_value > 0.0 &&
                    out.min_singular_value > kIndependenceThreshold * out.max_singular_value;
  return out;
}

std::vector<Point> sample_points(const Domain& domain, int order, std::size_t count, std::uint64_t seed) {
  if (order < 1) fail(ErrorKind::InvalidArgument, "sample_points: N must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(domain.lo, domain.hi);
  std::vector<Point> pts(count, Point(static_cast<std::size_t>(order)));
  for (auto& p : pts)
    for (double& x : p) x = u(rng);
  return pts;
}

}  // namespace antisym
