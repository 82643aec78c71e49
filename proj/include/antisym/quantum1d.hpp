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


#ifndef ANTISYM_QUANTUM1D_HPP
#define ANTISYM_QUANTUM1D_HPP

// Composite Gauss-Legendre quadrature, 1D soft-Coulomb systems, and inner
// products / energies of separable functions sampled on a quadrature grid.
// N-dimensional integrals reduce to products of 1D (and, for the pair
// interaction, 2D) quadrature sums.

#include <cmath>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "antisym/tensor_core.hpp"

namespace antisym {

struct QuadratureGrid {
  double a = -10.0;
  double b = 10.0;
  int subintervals = 30;
  int points_per_subinterval = 30;
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive, sum b - a

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Legendre rule on [-1, 1] (Newton on P_q, accurate to rounding).
void gauss_legendre_rule(int q, std::vector<double>& nodes, std::vector<double>& weights);

/// q-point rule mapped onto each of n uniform subintervals of [a, b].
/// Throws Error(InvalidArgument) unless a < b and n, q >= 1.
QuadratureGrid gauss_legendre_grid(double a, double b, int subintervals, int points);

/// Default grid: [-10, 10], 30 subintervals, 30 points each.
inline QuadratureGrid default_grid() { return gauss_legendre_grid(-10.0, 10.0, 30, 30); }

// ---------------------------------------------------------------------------
// Systems

struct Nucleus {
  double position = 0.0;
  double charge = 1.0;
};

struct System1D {
  int n_electrons = 1;
  std::vector<Nucleus> nuclei;

  /// Throws Error(InvalidArgument) on N < 1 or non-positive charges.
  void validate() const;
};

/// Li-like atom: Z = 3 at 0, with the given electron count (3 by default).
System1D lithium_system(int electrons = 3);
/// HeH+: Z = 2 at 0, Z = 1 at 1.463, two electrons.
System1D heh_cation_system();

/// -sum_I Z_I / sqrt(1 + (r - R_I)^2).
double one_body_potential(const System1D& system, double r) noexcept;

/// 1 / sqrt(1 + (r - rp)^2).
inline double two_body_potential(double r, double rp) noexcept {
  const double d = r - rp;
  return 1.0 / std::sqrt(1.0 + d * d);
}

/// Row-major n x n matrix of two_body_potential(x_a, x_b) over the grid
/// nodes (unweighted).
std::vector<double> pair_interaction_matrix(const QuadratureGrid& grid);

// Text format, one directive per line, '#' comments:
//   nucleus <position> <charge>
//   electrons <N>
void write_system(std::ostream& out, const System1D& system);
System1D read_system(std::istream& in);

// ---------------------------------------------------------------------------
// Separable functions on a grid
//
//   f(r) = c * sum_{(s, pi)} s * sum_i prod_l psi_{i, pi(l)}(r_l)
//
// With no permutation structure the outer sum is the single term (+1, id)
// and c = 1. psi values and first derivatives are stored at the grid nodes.

struct SeparableFunction {
  int rank = 0;   // p
  int order = 0;  // N
  std::vector<std::vector<ComplexVector>> values;  // [i][j][node]
  std::vector<std::vector<ComplexVector>> derivs;  // same shape, or empty
  std::vector<Permutation> perms;                  // empty: plain sum
  double prefactor = 1.0;

  std::size_t nodes() const noexcept;
  bool has_derivs() const noexcept { return !derivs.empty(); }

  /// Throws Error(DimensionMismatch) on ragged shapes or permutation sizes.
  void validate() const;

  /// Pointwise value with coordinate l at grid node node_index[l].
  Complex evaluate_at_nodes(std::span<const std::size_t> node_index) const;

  /// The equivalent plain sum of rank * |perms| terms (prefactor and signs
  /// folded into the first mode).
  SeparableFunction expanded() const;
};

/// <f, g> = integral of conj(f) g. Throws Error(DimensionMismatch) on
/// differing N or node count, and when grid size differs from the nodes.
Complex overlap(const SeparableFunction& f, const SeparableFunction& g, const QuadratureGrid& grid);

struct EnergyTerms {
  double kinetic = 0.0;   // 1/2 sum_l <d_l f, d_l f>
  double one_body = 0.0;  // sum_l <f, v(r_l) f>
  double two_body = 0.0;  // sum_{l<m} <f, w(r_l, r_m) f>
  double norm = 0.0;      // <f, f>

  double total() const noexcept { return kinetic + one_body + two_body; }
  double rayleigh_quotient() const noexcept { return total() / norm; }
};

inline constexpr double kDegenerateNorm = 1e-14;

/// Requires derivatives. Throws Error(Degenerate) when norm < 1e-14 and
/// Error(NumericFailure) when a physical scalar has an imaginary part above
/// 1e-10 |Re| + 1e-12.
EnergyTerms energy_terms(const SeparableFunction& f, const System1D& system, const QuadratureGrid& grid);

/// <f, f o T_ij> with T_ij swapping coordinates i and j (1-based, i < j).
Complex swap_overlap(const SeparableFunction& f, int i, int j, const QuadratureGrid& grid);

/// Checks |Im z| <= 1e-10 |Re z| + 1e-12 and returns Re z; otherwise throws
/// Error(NumericFailure) naming the quantity.
double physical_real(Complex z, const char* what);

}  // namespace antisym

#endif  // ANTISYM_QUANTUM1D_HPP
