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
#include <functional>
#include <numbers>
#include <sstream>

#include "antisym/error.hpp"
#include "antisym/quantum1d.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace antisym;
using namespace antisym::testing;

namespace {

// c (1 + b x) exp(-alpha (x - mu)^2) with its derivative.
struct Mode {
  Complex c;
  double b, alpha, mu;
  Complex value(double x) const { return c * (1.0 + b * x) * std::exp(-alpha * (x - mu) * (x - mu)); }
  Complex deriv(double x) const {
    return c * (b - 2.0 * alpha * (x - mu) * (1.0 + b * x)) * std::exp(-alpha * (x - mu) * (x - mu));
  }
};

Mode random_mode(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Mode{random_complex(rng), 0.5 * u(rng), 0.5 + 0.4 * u(rng), 1.5 * u(rng)};
}

using ModeTable = std::vector<std::vector<Mode>>;  // [i][j]

ModeTable random_modes(int p, int n, std::mt19937_64& rng) {
  ModeTable t(static_cast<std::size_t>(p));
  for (auto& term : t)
    for (int j = 0; j < n; ++j) term.push_back(random_mode(rng));
  return t;
}

SeparableFunction sample(const ModeTable& t, const QuadratureGrid& g) {
  SeparableFunction f;
  f.rank = static_cast<int>(t.size());
  f.order = static_cast<int>(t.front().size());
  for (const auto& term : t) {
    std::vector<ComplexVector> v, d;
    for (const Mode& m : term) {
      ComplexVector vv, dd;
      for (double x : g.nodes) {
        vv.push_back(m.value(x));
        dd.push_back(m.deriv(x));
      }
      v.push_back(vv);
      d.push_back(dd);
    }
    f.values.push_back(v);
    f.derivs.push_back(d);
  }
  return f;
}

// Plain-sum value of an N=2 mode table, optionally antisymmetrized.
Complex value2(const ModeTable& t, double x, double y, bool anti = false) {
  Complex s{};
  for (const auto& term : t) {
    s += term[0].value(x) * term[1].value(y);
    if (anti) s -= term[0].value(y) * term[1].value(x);
  }
  return anti ? 0.5 * s : s;
}

// Brute-force double sum over the full tensor grid.
Complex grid2(const QuadratureGrid& g, const std::function<Complex(double, double)>& h) {
  Complex s{};
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) s += g.weights[a] * g.weights[b] * h(g.nodes[a], g.nodes[b]);
  return s;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

SeparableFunction with_all_perms(SeparableFunction f) {
  f.perms = all_permutations(f.order);
  f.prefactor = 1.0 / static_cast<double>(factorial(f.order));
  return f;
}

}  // namespace

TEST_CASE("gauss_legendre_grid") {
  SUBCASE("x^2 on [-1,1] with 2 points") {
    const auto g = gauss_legendre_grid(-1, 1, 1, 2);
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * g.nodes[i] * g.nodes[i];
    CHECK(std::abs(s - 2.0 / 3.0) <= 1e-15);
  }
  SUBCASE("Gaussian integral on the 30x30 grid") {
    const auto g = default_grid();
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::exp(-g.nodes[i] * g.nodes[i]);
    const double oracle = std::sqrt(std::numbers::pi) * std::erf(10.0);
    CHECK(std::abs(s - oracle) / oracle <= 1e-12);
  }
  SUBCASE("layout invariants") {
    const auto g = default_grid();
    CHECK(g.size() == 900);
    double sum = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g.weights[i] > 0.0);
      if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
      sum += g.weights[i];
    }
    CHECK(std::abs(sum - 20.0) <= 1e-12);
  }
  SUBCASE("degree 2q-1 exactness per subinterval") {
    for (int q = 1; q <= 10; ++q) {
      const auto g = gauss_legendre_grid(-0.7, 1.3, 3, q);
      for (int deg = 0; deg <= 2 * q - 1; ++deg) {
        double s = 0;
        for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], deg);
        const double exact = (std::pow(1.3, deg + 1) - std::pow(-0.7, deg + 1)) / (deg + 1);
        CHECK(std::abs(s - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
      }
    }
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(gauss_legendre_grid(1, 1, 2, 2), Error);
    CHECK_THROWS_AS(gauss_legendre_grid(0, 1, 0, 2), Error);
    CHECK_THROWS_AS(gauss_legendre_grid(0, 1, 2, 0), Error);
  }
}

TEST_CASE("potentials") {
  CHECK(one_body_potential(lithium_system(), 0.0) == -3.0);
  const double heh = one_body_potential(heh_cation_system(), 0.0);
  CHECK(std::abs(heh - (-2.0 - 1.0 / std::sqrt(1.0 + 1.463 * 1.463))) <= 1e-15);
  CHECK(heh == doctest::Approx(-2.5642995).epsilon(1e-7));
  double prev = one_body_potential(lithium_system(), 0.0);
  for (double r = 0.5; r < 200.0; r *= 2) {
    const double v = one_body_potential(lithium_system(), r);
    CHECK(v > prev);
    CHECK(v < 0.0);
    CHECK(one_body_potential(lithium_system(), -r) == v);
    prev = v;
  }
  CHECK(std::abs(one_body_potential(lithium_system(), 1e9)) < 1e-8);

  CHECK(two_body_potential(0.3, 0.3) == 1.0);
  CHECK(two_body_potential(1.0, 1.0 + std::sqrt(3.0)) == doctest::Approx(0.5).epsilon(1e-15));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(two_body_potential(a, b) == two_body_potential(b, a));
    CHECK(two_body_potential(a, b) > 0.0);
    CHECK(two_body_potential(a, b) <= 1.0);
  }
}

TEST_CASE("system file") {
  std::stringstream ss;
  write_system(ss, heh_cation_system());
  const auto s = read_system(ss);
  CHECK(s.n_electrons == 2);
  REQUIRE(s.nuclei.size() == 2);
  CHECK(s.nuclei[1].position == 1.463);
  CHECK(s.nuclei[0].charge == 2.0);

  std::istringstream li("# Li\nnucleus 0.0 3\n\nelectrons 3\n");
  CHECK(read_system(li).n_electrons == 3);

  for (const char* bad : {"nucleus 0 3\n", "electrons 0\n", "nucleus 0 -1\nelectrons 1\n",
                          "electrons 1\nelectrons 2\n", "atom 0 1\nelectrons 1\n", "electrons 2 x\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_system(in), Error);
  }
}

TEST_CASE("overlap") {
  const auto g = default_grid();
  SUBCASE("Gaussian norm is positive real") {
    const ModeTable t{{Mode{1.0, 0.0, 0.5, 0.0}, Mode{1.0, 0.0, 0.5, 0.0}}};
    const auto f = sample(t, g);
    const Complex n = overlap(f, f, g);
    CHECK(n.real() > 0);
    CHECK(n.imag() == 0.0);
    CHECK(n.real() == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  }
  SUBCASE("disjoint supports") {
    // Bumps on [-9,-7] and [7,9], compactly supported and zero at every node outside.
    auto bump = [](double c) {
      return [c](double x) { return std::abs(x - c) < 1 ? std::pow(1 - (x - c) * (x - c), 4) : 0.0; };
    };
    SeparableFunction f, h;
    f.rank = h.rank = 1;
    f.order = h.order = 1;
    ComplexVector a, b;
    for (double x : g.nodes) {
      a.push_back(bump(-8)(x));
      b.push_back(bump(8)(x));
    }
    f.values = {{a}};
    h.values = {{b}};
    CHECK(std::abs(overlap(f, h, g)) <= 1e-14);
  }
  SUBCASE("N=2 random p=2 against the full tensor grid") {
    std::mt19937_64 rng(3);
    const auto tf = random_modes(2, 2, rng), tg = random_modes(2, 2, rng);
    const Complex got = overlap(sample(tf, g), sample(tg, g), g);
    const Complex oracle =
        grid2(g, [&](double x, double y) { return std::conj(value2(tf, x, y)) * value2(tg, x, y); });
    CHECK(rel(got, oracle) <= 1e-10);
  }
  SUBCASE("Hermitian symmetry") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      std::mt19937_64 rng(seed);
      const auto f = sample(random_modes(2, 3, rng), g), h = sample(random_modes(3, 3, rng), g);
      CHECK(std::abs(overlap(f, h, g) - std::conj(overlap(h, f, g))) <= 1e-12 * std::abs(overlap(f, h, g)));
    }
  }
  SUBCASE("permutation structure equals the expanded sum") {
    for (int n = 1; n <= 3; ++n) {
      std::mt19937_64 rng(40 + static_cast<std::uint64_t>(n));
      const auto f = with_all_perms(sample(random_modes(2, n, rng), g));
      const auto h = with_all_perms(sample(random_modes(3, n, rng), g));
      const Complex a = overlap(f, h, g);
      const Complex b = overlap(f.expanded(), h.expanded(), g);
      CHECK(rel(a, b) <= 1e-12);
      CHECK(f.expanded().rank == 2 * static_cast<int>(factorial(n)));
    }
  }
  SUBCASE("shape errors") {
    std::mt19937_64 rng(5);
    const auto f = sample(random_modes(1, 2, rng), g), h = sample(random_modes(1, 3, rng), g);
    CHECK_THROWS_AS(overlap(f, h, g), Error);
    CHECK_THROWS_AS(overlap(f, f, gauss_legendre_grid(-10, 10, 2, 2)), Error);
    auto bad = f;
    bad.values[0][1].pop_back();
    CHECK_THROWS_AS(overlap(bad, bad, g), Error);
  }
}

TEST_CASE("energy_terms") {
  const auto g = default_grid();
  const System1D free1{1, {}};
  SUBCASE("unit Gaussian kinetic energy") {
    const auto f = sample({{Mode{1.0, 0.0, 0.5, 0.0}}}, g);
    const auto e = energy_terms(f, free1, g);
    CHECK(std::abs(e.kinetic / e.norm - 0.25) <= 1e-12);
    CHECK(e.one_body == 0.0);
    CHECK(e.two_body == 0.0);
  }
  SUBCASE("two narrow bumps see 1/sqrt(1+D^2)") {
    const double width = 0.05, dist = 2.0;
    const double alpha = 1.0 / (2 * width * width);
    const auto f = sample({{Mode{1.0, 0.0, alpha, -1.0}, Mode{1.0, 0.0, alpha, -1.0 + dist}}}, g);
    const auto e = energy_terms(f, System1D{2, {}}, g);
    CHECK(std::abs(e.two_body / e.norm - 1.0 / std::sqrt(1 + dist * dist)) <= 1e-3);
  }
  SUBCASE("N=2 one- and two-body against the full tensor grid") {
    std::mt19937_64 rng(7);
    const auto t = random_modes(2, 2, rng);
    const auto sys = heh_cation_system();
    const auto e = energy_terms(sample(t, g), sys, g);
    const Complex one = grid2(g, [&](double x, double y) {
      return std::norm(value2(t, x, y)) * (one_body_potential(sys, x) + one_body_potential(sys, y));
    });
    const Complex two =
        grid2(g, [&](double x, double y) { return std::norm(value2(t, x, y)) * two_body_potential(x, y); });
    CHECK(rel(e.one_body, one) <= 1e-10);
    CHECK(rel(e.two_body, two) <= 1e-10);
  }
  SUBCASE("permuted N=3 energies equal the expanded ones") {
    std::mt19937_64 rng(8);
    const auto f = with_all_perms(sample(random_modes(2, 3, rng), g));
    const auto sys = lithium_system();
    const auto a = energy_terms(f, sys, g), b = energy_terms(f.expanded(), sys, g);
    CHECK(std::abs(a.kinetic - b.kinetic) <= 1e-12 * std::abs(b.kinetic));
    CHECK(std::abs(a.one_body - b.one_body) <= 1e-12 * std::abs(b.one_body));
    CHECK(std::abs(a.two_body - b.two_body) <= 1e-12 * std::abs(b.two_body));
    CHECK(std::abs(a.norm - b.norm) <= 1e-12 * b.norm);
  }
  SUBCASE("positivity") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::mt19937_64 rng(seed);
      const auto e = energy_terms(sample(random_modes(3, 2, rng), g), heh_cation_system(), g);
      CHECK(e.norm > 0);
      CHECK(e.kinetic >= 0);
      CHECK(e.two_body >= 0);
    }
  }
  SUBCASE("gradient form against -1/2 <f, f''>") {
    const ModeTable t{{Mode{1.0, 0.3, 0.7, 0.2}}};
    const auto e = energy_terms(sample(t, g), free1, g);
    const double h = 1e-4;
    Complex lap{};
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.nodes[i];
      const Complex f2 = (t[0][0].value(x + h) - 2.0 * t[0][0].value(x) + t[0][0].value(x - h)) / (h * h);
      lap += g.weights[i] * std::conj(t[0][0].value(x)) * f2;
    }
    CHECK(std::abs(e.kinetic - (-0.5 * lap.real())) <= 1e-4 * e.kinetic);
  }
  SUBCASE("errors") {
    auto f = sample({{Mode{1.0, 0.0, 0.5, 0.0}}}, g);
    auto no_d = f;
    no_d.derivs.clear();
    CHECK_THROWS_AS(energy_terms(no_d, free1, g), Error);
    auto zero = f;
    for (auto& z : zero.values[0][0]) z = 0.0;
    try {
      energy_terms(zero, free1, g);
      CHECK(false);
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::Degenerate);
    }
    CHECK_THROWS_AS(physical_real(Complex(1.0, 1e-6), "x"), Error);
    CHECK(physical_real(Complex(1.0, 1e-13), "x") == 1.0);
  }
}

TEST_CASE("swap_overlap") {
  const auto g = default_grid();
  SUBCASE("antisymmetrized N=2 gives -norm") {
    std::mt19937_64 rng(9);
    const auto f = with_all_perms(sample(random_modes(2, 2, rng), g));
    const Complex n = overlap(f, f, g);
    CHECK(std::abs(swap_overlap(f, 1, 2, g) + n) <= 1e-10 * std::abs(n));
  }
  SUBCASE("symmetric gives +norm") {
    std::mt19937_64 rng(10);
    const Mode m = random_mode(rng);
    const auto f = sample({{m, m, m}}, g);
    const Complex n = overlap(f, f, g);
    for (auto [i, j] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}})
      CHECK(std::abs(swap_overlap(f, i, j, g) - n) <= 1e-12 * std::abs(n));
  }
  SUBCASE("random N=2 against the full tensor grid") {
    std::mt19937_64 rng(11);
    const auto t = random_modes(2, 2, rng);
    const Complex oracle =
        grid2(g, [&](double x, double y) { return std::conj(value2(t, x, y)) * value2(t, y, x); });
    CHECK(rel(swap_overlap(sample(t, g), 1, 2, g), oracle) <= 1e-10);
  }
  SUBCASE("index errors") {
    std::mt19937_64 rng(12);
    const auto f = sample(random_modes(1, 2, rng), g);
    CHECK_THROWS_AS(swap_overlap(f, 2, 1, g), Error);
    CHECK_THROWS_AS(swap_overlap(f, 0, 2, g), Error);
    CHECK_THROWS_AS(swap_overlap(f, 1, 3, g), Error);
  }
}

TEST_CASE("evaluate_at_nodes with permutation structure") {
  const auto g = gauss_legendre_grid(-3, 3, 4, 5);
  std::mt19937_64 rng(13);
  const auto t = random_modes(2, 2, rng);
  const auto f = with_all_perms(sample(t, g));
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int k = 0; k < 20; ++k) {
    const std::size_t a = pick(rng), b = pick(rng);
    const std::size_t ab[] = {a, b};
    const Complex oracle = value2(t, g.nodes[a], g.nodes[b], true);
    CHECK(std::abs(f.evaluate_at_nodes(ab) - oracle) <= 1e-14 * std::max(1.0, std::abs(oracle)));
  }
}
