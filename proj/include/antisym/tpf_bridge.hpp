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


#ifndef ANTISYM_TPF_BRIDGE_HPP
#define ANTISYM_TPF_BRIDGE_HPP

// Tensor product functions over a finite 1-block basis {phi_1..phi_K}:
//
//   f(r_1..r_N) = sum_i prod_j psi_ij(r_j),   psi_ij = sum_k c_ijk phi_k
//
// The coefficient vectors c_ij. form a CpDecomposition; its dense form is the
// coefficient tensor X with f = sum_k X(k) prod_j phi_{k_j}(r_j).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "antisym/tensor_core.hpp"

namespace antisym {

struct Domain {
  double lo = 0.0;
  double hi = 1.0;
  std::string tag;  // free-form label, e.g. "monomial"
};

/// K functions on a 1D domain. evaluate(k, x) takes a 1-based k.
struct FunctionBasis {
  int size = 0;
  std::function<Complex(int, double)> evaluate;
  Domain domain;

  /// Throws Error(InvalidArgument) on size < 1, a missing callable or an
  /// empty domain.
  void validate() const;
};

/// x^(k-1) on [lo, hi].
FunctionBasis monomial_basis(int size, double lo = -1.0, double hi = 1.0);

/// Unit-height indicators of K equal cells of [lo, hi] (half-open, last cell
/// closed). Orthogonal, and exactly independent on points hitting every cell.
FunctionBasis indicator_basis(int size, double lo = 0.0, double hi = 1.0);

/// A point in Omega^N: one coordinate per block.
using Point = std::vector<double>;

class TpfFunction {
 public:
  TpfFunction() = default;
  TpfFunction(int order, FunctionBasis basis, std::optional<CpDecomposition> cp,
              std::optional<DenseTensor> coeffs);

  int order() const noexcept { return order_; }
  const FunctionBasis& basis() const noexcept { return basis_; }
  const std::optional<CpDecomposition>& cp() const noexcept { return cp_; }
  const std::optional<DenseTensor>& coeffs() const noexcept { return coeffs_; }

 private:
  int order_ = 0;
  FunctionBasis basis_;
  std::optional<CpDecomposition> cp_;
  std::optional<DenseTensor> coeffs_;
};

inline constexpr double kRepresentationTolerance = 1e-12;

/// Dense coefficient tensor of a CP-held TPF. Throws Error(InvalidArgument)
/// when no CP representation is present.
DenseTensor tpf_to_tensor(const TpfFunction& f);

/// Wraps a CP decomposition of coefficient vectors as a TPF. Throws
/// Error(DimensionMismatch) unless every mode dim equals basis.size.
TpfFunction tensor_to_tpf(const CpDecomposition& cp, const FunctionBasis& basis);

/// f at each point, from the CP form when present and the dense form
/// otherwise. Points must have N coordinates.
ComplexVector evaluate_tpf(const TpfFunction& f, const std::vector<Point>& points);

/// Antisymmetrizer applied to every representation present. The CP form
/// grows to rank * N!.
TpfFunction antisymmetrize_tpf(const TpfFunction& f);

/// Unnormalized Slater determinant of the N orbitals (coefficient vectors of
/// length K): N! terms, term pi carrying factors (sgn(pi) psi_pi(1),
/// psi_pi(2), ..., psi_pi(N)). Its coefficient tensor for unit orbitals
/// e_k1..e_kN is exactly E_k. Throws Error(InvalidArgument) when K < N.
TpfFunction slater_tpf(const std::vector<ComplexVector>& orbitals, const FunctionBasis& basis);

struct IndependenceCheck {
  double min_singular_value = 0.0;
  double max_singular_value = 0.0;
  bool independent = false;
};

inline constexpr double kIndependenceThreshold = 1e-8;
inline constexpr std::size_t kMaxProductFunctions = 4096;

/// Evaluates all K^N products phi_{k_1}(r_1)...phi_{k_N}(r_N) at the samples
/// and tests the singular values of the (samples x K^N) matrix. Throws
/// Error(InvalidArgument) with fewer than K^N samples and Error(TooLarge)
/// beyond kMaxProductFunctions columns.
IndependenceCheck gram_independence_check(const FunctionBasis& basis, int order,
                                          const std::vector<Point>& samples);

/// Fixed-seed uniform draws over domain^N.
std::vector<Point> sample_points(const Domain& domain, int order, std::size_t count,
                                 std::uint64_t seed = 0x7a11);

// ---------------------------------------------------------------------------
// Text format
//
//   tpf N K p
//   re im re im ...          (K pairs per line; p*N lines, term-major)

void write_tpf(std::ostream& out, const CpDecomposition& cp);
CpDecomposition read_tpf(std::istream& in);

}  // namespace antisym

#endif  // ANTISYM_TPF_BRIDGE_HPP
