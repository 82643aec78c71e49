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


#include <cmath>
#include <numeric>

#include "antisym/error.hpp"
#include "antisym/kernels.hpp"
#include "antisym/quantum1d.hpp"

namespace antisym {

namespace {

// One term of the expanded sum: coefficient and, per coordinate, the flat
// function index i*N + pi(l) - 1.
struct Term {
  double coef;
  std::vector<int> fn;
};

std::vector<Term> expand_terms(const SeparableFunction& f) {
  const int n = f.order;
  std::vector<Term> out;
  if (f.perms.empty()) {
    for (int i = 0; i < f.rank; ++i) {
      Term t{f.prefactor, std::vector<int>(static_cast<std::size_t>(n))};
      for (int l = 0; l < n; ++l) t.fn[static_cast<std::size_t>(l)] = i * n + l;
      out.push_back(std::move(t));
    }
    return out;
  }
  for (const Permutation& p : f.perms) {
    for (int i = 0; i < f.rank; ++i) {
      Term t{f.prefactor * p.sign, std::vector<int>(static_cast<std::size_t>(n))};
      for (int l = 0; l < n; ++l) t.fn[static_cast<std::size_t>(l)] = i * n + p(l + 1) - 1;
      out.push_back(std::move(t));
    }
  }
  return out;
}

// Flat list of mode vectors, index i*N + j.
std::vector<const ComplexVector*> flat_modes(const std::vector<std::vector<ComplexVector>>& v) {
  std::vector<const ComplexVector*> out;
  for (const auto& term : v)
    for (const auto& mode : term) out.push_back(&mode);
  return out;
}

// M[a][b] = sum_x w(x) conj(f_a(x)) g_b(x) for a weight vector w.
std::vector<ComplexVector> weighted_gram(const std::vector<const ComplexVector*>& f,
                                         const std::vector<const ComplexVector*>& g,
                                         const std::vector<double>& w) {
  const auto& k = kernels::active();
  std::vector<ComplexVector> m(f.size(), ComplexVector(g.size()));
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) m[a][b] = k.zwdot(w.data(), f[a]->data(), g[b]->data(), w.size());
  return m;
}

void require_compatible(const SeparableFunction& f, const SeparableFunction& g, const QuadratureGrid& grid) {
  f.validate();
  g.validate();
  if (f.order != g.order) fail(ErrorKind::DimensionMismatch, "separable functions have different N");
  if (f.nodes() != grid.size() || g.nodes() != grid.size())
    fail(ErrorKind::DimensionMismatch, "separable function sampled on a different grid");
}

Complex overlap_terms(const std::vector<ComplexVector>& s, const std::vector<Term>& tf,
                      const std::vector<Term>& tg) {
  Complex sum{};
  for (const Term& a : tf) {
    for (const Term& b : tg) {
      Complex prod = a.coef * b.coef;
      for (std::size_t l = 0; l < a.fn.size(); ++l)
        prod *= s[static_cast<std::size_t>(a.fn[l])][static_cast<std::size_t>(b.fn[l])];
      sum += prod;
    }
  }
  return sum;
}

// sum_{a,b} c_a c_b sum_l M[a_l][b_l] prod_{m != l} S[a_m][b_m]
Complex one_coordinate_sum(const std::vector<ComplexVector>& s, const std::vector<ComplexVector>& m,
                           const std::vector<Term>& terms) {
  Complex sum{};
  const std::size_t n = terms.empty() ? 0 : terms.front().fn.size();
  for (const Term& a : terms) {
    for (const Term& b : terms) {
      Complex acc{};
      for (std::size_t l = 0; l < n; ++l) {
        Complex prod = m[static_cast<std::size_t>(a.fn[l])][static_cast<std::size_t>(b.fn[l])];
        for (std::size_t o = 0; o < n; ++o)
          if (o != l) prod *= s[static_cast<std::size_t>(a.fn[o])][static_cast<std::size_t>(b.fn[o])];
        acc += prod;
      }
      sum += a.coef * b.coef * acc;
    }
  }
  return sum;
}

}  // namespace

std::vector<double> pair_interaction_matrix(const QuadratureGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> w(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) w[a * n + b] = two_body_potential(grid.nodes[a], grid.nodes[b]);
  return w;
}

double physical_real(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    fail(ErrorKind::NumericFailure, std::string(what) + " is not finite");
  if (std::abs(z.imag()) > 1e-10 * std::abs(z.real()) + 1e-12)
    fail(ErrorKind::NumericFailure, std::string(what) + " has imaginary part " + std::to_string(z.imag()));
  return z.real();
}

std::size_t SeparableFunction::nodes() const noexcept {
  if (values.empty() || values.front().empty()) return 0;
  return values.front().front().size();
}

void SeparableFunction::validate() const {
  if (rank < 0 || order < 1) fail(ErrorKind::DimensionMismatch, "separable function needs p >= 0 and N >= 1");
  if (values.size() != static_cast<std::size_t>(rank))
    fail(ErrorKind::DimensionMismatch, "separable function: values has wrong term count");
  const std::size_t n = nodes();
  auto check = [&](const std::vector<std::vector<ComplexVector>>& v, const char* what) {
    if (v.size() != static_cast<std::size_t>(rank))
      fail(ErrorKind::DimensionMismatch, std::string("separable function: ") + what + " has wrong term count");
    for (const auto& term : v) {
      if (term.size() != static_cast<std::size_t>(order))
        fail(ErrorKind::DimensionMismatch, std::string("separable function: ") + what + " has wrong mode count");
      for (const auto& mode : term)
        if (mode.size() != n)
          fail(ErrorKind::DimensionMismatch, std::string("separable function: ") + what + " has ragged node counts");
    }
  };
  check(values, "values");
  if (has_derivs()) check(derivs, "derivs");
  for (const Permutation& p : perms)
    if (p.size() != order) fail(ErrorKind::DimensionMismatch, "separable function: permutation of wrong size");
}

Complex SeparableFunction::evaluate_at_nodes(std::span<const std::size_t> node_index) const {
  if (node_index.size() != static_cast<std::size_t>(order))
    fail(ErrorKind::DimensionMismatch, "evaluate_at_nodes: wrong coordinate count");
  const auto modes = flat_modes(values);
  Complex sum{};
  for (const Term& t : expand_terms(*this)) {
    Complex prod = t.coef;
    for (std::size_t l = 0; l < node_index.size(); ++l) prod *= (*modes[static_cast<std::size_t>(t.fn[l])])[node_index[l]];
    sum += prod;
  }
  return sum;
}

SeparableFunction SeparableFunction::expanded() const {
  validate();
  const auto terms = expand_terms(*this);
  const auto vals = flat_modes(values);
  SeparableFunction out;
  out.rank = static_cast<int>(terms.size());
  out.order = order;
  const auto dvals = has_derivs() ? flat_modes(derivs) : std::vector<const ComplexVector*>{};
  for (const Term& t : terms) {
    std::vector<ComplexVector> v, d;
    for (std::size_t l = 0; l < t.fn.size(); ++l) {
      v.push_back(*vals[static_cast<std::size_t>(t.fn[l])]);
      if (has_derivs()) d.push_back(*dvals[static_cast<std::size_t>(t.fn[l])]);
    }
    for (Complex& z : v.front()) z *= t.coef;
    if (has_derivs())
      for (Complex& z : d.front()) z *= t.coef;
    out.values.push_back(std::move(v));
    if (has_derivs()) out.derivs.push_back(std::move(d));
  }
  return out;
}

Complex overlap(const SeparableFunction& f, const SeparableFunction& g, const QuadratureGrid& grid) {
  require_compatible(f, g, grid);
  const auto s = weighted_gram(flat_modes(f.values), flat_modes(g.values), grid.weights);
  return overlap_terms(s, expand_terms(f), expand_terms(g));
}

Complex swap_overlap(const SeparableFunction& f, int i, int j, const QuadratureGrid& grid) {
  require_compatible(f, f, grid);
  if (i < 1 || j > f.order || i >= j)
    fail(ErrorKind::InvalidArgument, "swap_overlap: need 1 <= i < j <= N, got (" + std::to_string(i) + ", " +
                                         std::to_string(j) + ")");
  const auto modes = flat_modes(f.values);
  const auto s = weighted_gram(modes, modes, grid.weights);
  const auto tf = expand_terms(f);
  auto tg = tf;
  for (Term& t : tg) std::swap(t.fn[static_cast<std::size_t>(i - 1)], t.fn[static_cast<std::size_t>(j - 1)]);
  return overlap_terms(s, tf, tg);
}

EnergyTerms energy_terms(const SeparableFunction& f, const System1D& system, const QuadratureGrid& grid) {
  require_compatible(f, f, grid);
  system.validate();
  if (!f.has_derivs()) fail(ErrorKind::InvalidArgument, "energy_terms: derivatives are required");
  const auto& kern = kernels::active();
  const std::size_t n = grid.size();
  const auto modes = flat_modes(f.values);
  const auto dmodes = flat_modes(f.derivs);
  const auto terms = expand_terms(f);

  std::vector<double> wv(n);
  for (std::size_t x = 0; x < n; ++x) wv[x] = grid.weights[x] * one_body_potential(system, grid.nodes[x]);
  const auto s = weighted_gram(modes, modes, grid.weights);
  const auto d = weighted_gram(dmodes, dmodes, grid.weights);
  const auto v = weighted_gram(modes, modes, wv);

  EnergyTerms e;
  e.norm = physical_real(overlap_terms(s, terms, terms), "norm");
  if (!(e.norm >= kDegenerateNorm))
    fail(ErrorKind::Degenerate, "energy_terms: norm " + std::to_string(e.norm) + " below 1e-14 (degenerate ansatz)");
  e.kinetic = 0.5 * physical_real(one_coordinate_sum(s, d, terms), "kinetic energy");
  e.one_body = physical_real(one_coordinate_sum(s, v, terms), "one-body energy");

  const int order = f.order;
  if (order >= 2) {
    // U[x][a*A + c] = w_x conj(f_a(x)) f_c(x);  T = U^T W U.
    const std::size_t nf = modes.size();
    const std::size_t cols = nf * nf;
    std::vector<double> ure(n * cols), uim(n * cols);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t a = 0; a < nf; ++a)
        for (std::size_t c = 0; c < nf; ++c) {
          const Complex u = grid.weights[x] * std::conj((*modes[a])[x]) * (*modes[c])[x];
          ure[x * cols + a * nf + c] = u.real();
          uim[x * cols + a * nf + c] = u.imag();
        }
    const auto w = pair_interaction_matrix(grid);
    std::vector<double> wre(n * cols, 0.0), wim(n * cols, 0.0);
    kern.gemm_nn(n, cols, n, w.data(), n, ure.data(), cols, wre.data(), cols);
    kern.gemm_nn(n, cols, n, w.data(), n, uim.data(), cols, wim.data(), cols);
    std::vector<double> rr(cols * cols, 0.0), ii(cols * cols, 0.0), ri(cols * cols, 0.0), ir(cols * cols, 0.0);
    kern.gemm_tn(cols, cols, n, ure.data(), cols, wre.data(), cols, rr.data(), cols);
    kern.gemm_tn(cols, cols, n, uim.data(), cols, wim.data(), cols, ii.data(), cols);
    kern.gemm_tn(cols, cols, n, ure.data(), cols, wim.data(), cols, ri.data(), cols);
    kern.gemm_tn(cols, cols, n, uim.data(), cols, wre.data(), cols, ir.data(), cols);
    auto t = [&](std::size_t a, std::size_t c, std::size_t b, std::size_t dd) {
      const std::size_t p = a * nf + c, q = b * nf + dd;
      return Complex(rr[p * cols + q] - ii[p * cols + q], ri[p * cols + q] + ir[p * cols + q]);
    };
    Complex sum{};
    for (const Term& ta : terms) {
      for (const Term& tb : terms) {
        Complex acc{};
        for (int l = 0; l < order; ++l) {
          for (int m = l + 1; m < order; ++m) {
            const auto fl = static_cast<std::size_t>(ta.fn[static_cast<std::size_t>(l)]);
            const auto fm = static_cast<std::size_t>(ta.fn[static_cast<std::size_t>(m)]);
            const auto gl = static_cast<std::size_t>(tb.fn[static_cast<std::size_t>(l)]);
            const auto gm = static_cast<std::size_t>(tb.fn[static_cast<std::size_t>(m)]);
            Complex prod = t(fl, gl, fm, gm);
            for (int o = 0; o < order; ++o)
              if (o != l && o != m)
                prod *= s[static_cast<std::size_t>(ta.fn[static_cast<std::size_t>(o)])]
                         [static_cast<std::size_t>(tb.fn[static_cast<std::size_t>(o)])];
            acc += prod;
          }
        }
        sum += ta.coef * tb.coef * acc;
      }
    }
    e.two_body = physical_real(sum, "two-body energy");
  }
  return e;
}

}  // namespace antisym
