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
#include <sstream>

#include "antisym/cp_rank.hpp"
#include "antisym/error.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace antisym;
using namespace antisym::testing;

namespace {

ComplexVector unit(std::size_t k, std::size_t dim) {
  ComplexVector e(dim);
  e[k - 1] = 1.0;
  return e;
}

/// Singular values of a real 2x2 matrix from the closed-form eigenvalues of
/// A^T A; best rank-1 relative residual is s_min / ||A||_F.
double best_rank1_residual_2x2(double a, double b, double c, double d) {
  const double t = a * a + b * b + c * c + d * d;  // trace(A^T A)
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, t * t / 4 - det * det));
  const double smin2 = t / 2 - disc;
  return std::sqrt(smin2 / t);
}

}  // namespace

TEST_CASE("als_fit") {
  SUBCASE("exact rank-1 target") {
    CpDecomposition cp({2, 2});
    cp.add_term({unit(1, 2), unit(2, 2)});
    const auto fit = als_fit(dense_from_cp(cp), 1);
    CHECK(fit.relative_residual <= 1e-12);
  }
  SUBCASE("determinant tensor N=3 at rank 5") {
    const auto fit = als_fit(determinant_tensor(3), 5);
    CHECK(fit.relative_residual <= 1e-8);
    CHECK(relative_residual(determinant_tensor(3), fit.cp) <= 1e-8);
  }
  SUBCASE("rank-1 approximation of the 2x2 determinant") {
    const double oracle = best_rank1_residual_2x2(0, 1, -1, 0);
    CHECK(oracle == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    const auto fit = als_fit(determinant_tensor(2), 1);
    CHECK(fit.relative_residual >= 0.5);
    CHECK(fit.relative_residual == doctest::Approx(oracle).epsilon(1e-6));
  }
  SUBCASE("rank 0") {
    const auto fit = als_fit(determinant_tensor(2), 0);
    CHECK(fit.cp.rank() == 0);
    CHECK(fit.relative_residual == 1.0);
  }
  SUBCASE("deterministic for a fixed seed") {
    std::mt19937_64 rng(1);
    const DenseTensor x = random_tensor(3, 3, rng);
    AlsOptions o;
    o.restarts = 3;
    o.max_sweeps = 50;
    const auto a = als_fit(x, 2, o);
    const auto b = als_fit(x, 2, o);
    CHECK(a.relative_residual == b.relative_residual);
    CHECK(a.cp.terms == b.cp.terms);
  }
  SUBCASE("errors") {
    AlsOptions bad;
    bad.restarts = 0;
    CHECK_THROWS_AS(als_fit(determinant_tensor(2), 1, bad), Error);
    CHECK_THROWS_AS(als_fit(DenseTensor::cube(2, 2), 1), Error);
  }
}

TEST_CASE("analytic bounds") {
  CHECK(det_rank_bounds(1).lower == 1);
  CHECK(det_rank_bounds(1).upper == 1);
  CHECK(det_rank_bounds(2).lower == 2);
  CHECK(det_rank_bounds(2).upper == 2);
  CHECK(det_rank_bounds(3).lower == 3);
  CHECK(det_rank_bounds(3).upper == 5);
  // 720 * 25 / 36 = 500 exactly; a floating-point evaluation can land on 499.
  CHECK(det_rank_bounds(6).lower == 20);
  CHECK(det_rank_bounds(6).upper == 500);
  // 20! * (5/6)^6 = 2432902008176640000 * 15625 / 46656 (exact division check below)
  {
    const auto b = det_rank_bounds(20);
    CHECK(b.lower == 184756);
    const unsigned __int128 num = static_cast<unsigned __int128>(2432902008176640000ULL) * 15625U;
    CHECK(b.upper == static_cast<std::uint64_t>(num / 46656U));
  }
  CHECK_THROWS_AS(det_rank_bounds(21), Error);
  CHECK_THROWS_AS(det_rank_bounds(0), Error);

  CHECK(antisym_rank_bounds(3, 3).lower == 3);
  CHECK(antisym_rank_bounds(3, 3).upper == 5);
  CHECK(antisym_rank_bounds(2, 4).lower == 2);
  CHECK(antisym_rank_bounds(2, 4).upper == 12);
  CHECK(antisym_rank_bounds(20, 20).lower == 184756);
  try {
    antisym_rank_bounds(2, 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Trivial);
  }
}

TEST_CASE("asymptotic lower bound") {
  CHECK(asymptotic_lower_bound(4).exact == 6);
  CHECK(asymptotic_lower_bound(4).asymptotic == 8.0);
  CHECK(asymptotic_lower_bound(10).exact == 252);
  CHECK(asymptotic_lower_bound(10).asymptotic == doctest::Approx(1024.0 / std::sqrt(10.0)));
  CHECK(asymptotic_lower_bound(20).exact == 184756);
  for (int n = 1; n <= 30; ++n) {
    const double r = asymptotic_lower_bound(n).ratio();
    CHECK(r >= 0.3);
    CHECK(r <= 1.0);
  }
  // Even-N ratios approach sqrt(2/pi).
  CHECK(asymptotic_lower_bound(30).ratio() == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.01));
}

TEST_CASE("rank_search") {
  SUBCASE("2x2 determinant") {
    const auto r = rank_search(determinant_tensor(2), 3);
    REQUIRE(r.estimated_rank);
    CHECK(*r.estimated_rank == 2);
    CHECK(r.heuristic);
  }
  SUBCASE("3x3x3 determinant") {
    const auto r = rank_search(determinant_tensor(3), 6);
    REQUIRE(r.estimated_rank);
    CHECK(*r.estimated_rank == 5);
    CHECK(r.lower_bound == 3);
    CHECK(r.upper_bound == 5);
    CHECK(r.residuals.at(5) <= 1e-8);
    CHECK(r.residuals.begin()->first == 3);
  }
  SUBCASE("basis tensor E_(1,3,5) in K=6 matches the determinant tensor") {
    const auto r = rank_search(basis_tensor(MultiIndex({1, 3, 5}, 6), 6), 6);
    REQUIRE(r.estimated_rank);
    CHECK(*r.estimated_rank == 5);
  }
  SUBCASE("not found is a valid outcome") {
    const auto r = rank_search(determinant_tensor(3), 4);
    CHECK_FALSE(r.estimated_rank);
    CHECK(r.residuals.size() == 2);
  }
}

TEST_CASE("residuals are non-increasing in rank") {
  std::mt19937_64 rng(3);
  AlsOptions o;
  o.restarts = 4;
  o.max_sweeps = 300;
  for (int trial = 0; trial < 3; ++trial) {
    const DenseTensor x = random_tensor(3, 3, rng);
    const auto r = rank_search(x, 6, o);
    double prev = 2.0;
    for (const auto& [p, res] : r.residuals) {
      CAPTURE(p);
      CHECK(res <= prev);
      prev = res;
    }
  }
}

TEST_CASE("fits below the analytic lower bound never reach 1e-8") {
  std::mt19937_64 rng(29);
  AlsOptions o;
  o.restarts = 4;
  o.max_sweeps = 500;
  struct Case {
    int n, k;
  };
  for (Case c : {Case{2, 3}, Case{3, 4}, Case{4, 4}}) {
    const DenseTensor x = c.n == 4 ? determinant_tensor(4) : antisymmetrize(random_tensor(c.n, static_cast<std::size_t>(c.k), rng));
    const auto lower = static_cast<int>(antisym_rank_bounds(c.n, c.k).lower);
    for (int p = 1; p < lower; ++p) {
      CAPTURE(c.n);
      CAPTURE(p);
      CHECK(als_fit(x, p, o).relative_residual > 1e-8);
    }
  }
}

TEST_CASE("basis tensors share the determinant tensor's rank") {
  AlsOptions o;
  for (auto [n, k] : {std::pair{2, 4}, std::pair{3, 5}}) {
    const auto det = rank_search(determinant_tensor(n), 6, o);
    REQUIRE(det.estimated_rank);
    for (const MultiIndex& idx : enumerate_multi_indices(n, k)) {
      CAPTURE(idx.to_string());
      const auto r = rank_search(basis_tensor(idx, k), 6, o);
      REQUIRE(r.estimated_rank);
      CHECK(*r.estimated_rank == *det.estimated_rank);
    }
  }
}

TEST_CASE("embedding a fit of E keeps its residual against E_k") {
  const DenseTensor e = determinant_tensor(3);
  const MultiIndex k({2, 4, 5}, 6);
  const DenseTensor ek = basis_tensor(k, 6);
  for (int p : {4, 5}) {
    const auto fit = als_fit(e, p);
    const double embedded = relative_residual(ek, embed_cp(fit.cp, k, 6));
    CAPTURE(p);
    CHECK(embedded <= 2.0 * fit.relative_residual + 1e-15);
    CHECK(relative_residual(e, restrict_cp(embed_cp(fit.cp, k, 6), k)) == doctest::Approx(fit.relative_residual));
  }
}

TEST_CASE("rank report CSV") {
  RankReport r;
  r.lower_bound = 3;
  r.upper_bound = 5;
  r.residuals = {{3, 0.5}, {4, 0.25}};
  r.restarts_used = {{3, 16}, {4, 2}};
  r.estimated_rank = 4;
  std::ostringstream out;
  write_rank_report(out, r);
  CHECK(out.str() ==
        "# lower=3 upper=5 heuristic=true\n# estimated_rank=4\nrank,best_residual,restarts_used\n"
        "3,5.000000000e-01,16\n4,2.500000000e-01,2\n");
}
