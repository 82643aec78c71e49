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
#include <random>
#include <vector>

#include "antisym/kernels.hpp"
#include "doctest.h"

using namespace antisym::kernels;

namespace {

std::vector<double> random_doubles(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Tables under test: the scalar reference plus every SIMD variant the host
// can run. Each SIMD result is checked against the scalar one.
std::vector<const KernelTable*> simd_tables() {
  std::vector<const KernelTable*> out;
  if (const KernelTable* t = avx2_table()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("scalar kernels against hand-computed values") {
  const KernelTable& s = scalar_table();
  const double x[] = {1, 2, 3};
  const double y[] = {4, 5, 6};
  const double w[] = {0.5, 1, 2};
  CHECK(s.dot(x, y, 3) == 32.0);
  CHECK(s.wdot(w, x, y, 3) == 2.0 + 10.0 + 36.0);
  const std::complex<double> zx[] = {{1, 2}, {0, 1}};
  const std::complex<double> zy[] = {{3, -1}, {2, 2}};
  const double zw[] = {1.0, 0.5};
  // conj(1+2i)(3-i) = (1-2i)(3-i) = 1 - 7i ; 0.5 * conj(i)(2+2i) = 0.5*(2-2i) = 1 - i
  const auto z = s.zwdot(zw, zx, zy, 2);
  CHECK(z.real() == doctest::Approx(2.0));
  CHECK(z.imag() == doctest::Approx(-8.0));

  // [1 2; 3 4] * [5 6; 7 8] = [19 22; 43 50]
  const double a[] = {1, 2, 3, 4}, b[] = {5, 6, 7, 8};
  double c[4] = {0, 0, 0, 0};
  s.gemm_nn(2, 2, 2, a, 2, b, 2, c, 2);
  CHECK(c[0] == 19);
  CHECK(c[1] == 22);
  CHECK(c[2] == 43);
  CHECK(c[3] == 50);
  double ct[4] = {0, 0, 0, 0};
  // A^T B with A = [1 2; 3 4] -> [1 3; 2 4] * B = [26 30; 38 44]
  s.gemm_tn(2, 2, 2, a, 2, b, 2, ct, 2);
  CHECK(ct[0] == 26);
  CHECK(ct[1] == 30);
  CHECK(ct[2] == 38);
  CHECK(ct[3] == 44);
}

TEST_CASE("active backend is one of the known tables") {
  const KernelTable& t = active();
  CHECK((t.backend == Backend::Scalar || t.backend == Backend::Avx2));
  Backend b;
  CHECK(parse_backend("scalar", b));
  CHECK(b == Backend::Scalar);
  CHECK_FALSE(parse_backend("sse9", b));
}

TEST_CASE("SIMD dot products match the scalar reference") {
  std::mt19937_64 rng(7);
  const KernelTable& ref = scalar_table();
  for (const KernelTable* t : simd_tables()) {
    CAPTURE(t->name);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 900u, 1001u}) {
      CAPTURE(n);
      auto w = random_doubles(n, rng), x = random_doubles(n, rng), y = random_doubles(n, rng);
      const double scale = static_cast<double>(n) + 1.0;
      CHECK(std::abs(t->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= 1e-14 * scale);
      CHECK(std::abs(t->wdot(w.data(), x.data(), y.data(), n) - ref.wdot(w.data(), x.data(), y.data(), n)) <=
            1e-14 * scale);
      std::vector<std::complex<double>> zx(n), zy(n);
      for (std::size_t i = 0; i < n; ++i) {
        zx[i] = {x[i], y[i]};
        zy[i] = {w[i], -x[i]};
      }
      const auto a = t->zwdot(w.data(), zx.data(), zy.data(), n);
      const auto b = ref.zwdot(w.data(), zx.data(), zy.data(), n);
      CHECK(std::abs(a - b) <= 1e-14 * scale);
    }
  }
}

TEST_CASE("SIMD gemm variants match the scalar reference") {
  std::mt19937_64 rng(11);
  const KernelTable& ref = scalar_table();
  struct Shape {
    std::size_t m, n, k;
  };
  for (const KernelTable* t : simd_tables()) {
    CAPTURE(t->name);
    for (Shape s : {Shape{1, 1, 1}, Shape{3, 5, 2}, Shape{17, 36, 30}, Shape{40, 20, 20}, Shape{9, 16, 33},
                    Shape{5, 19, 7}}) {
      CAPTURE(s.m);
      CAPTURE(s.n);
      CAPTURE(s.k);
      // Padded leading dimensions exercise the stride arguments.
      const std::size_t lda = s.k + 1, ldb = s.n + 2, ldc = s.n + 3;
      auto a = random_doubles(s.m * lda, rng);
      auto b = random_doubles(s.k * ldb, rng);
      auto c0 = random_doubles(s.m * ldc, rng);
      auto c1 = c0;
      ref.gemm_nn(s.m, s.n, s.k, a.data(), lda, b.data(), ldb, c0.data(), ldc);
      t->gemm_nn(s.m, s.n, s.k, a.data(), lda, b.data(), ldb, c1.data(), ldc);
      double err = 0.0;
      for (std::size_t i = 0; i < c0.size(); ++i) err = std::max(err, std::abs(c0[i] - c1[i]));
      CHECK(err <= 1e-13);

      const std::size_t ldat = s.m + 1;
      auto at = random_doubles(s.k * ldat, rng);
      auto d0 = random_doubles(s.m * ldc, rng);
      auto d1 = d0;
      ref.gemm_tn(s.m, s.n, s.k, at.data(), ldat, b.data(), ldb, d0.data(), ldc);
      t->gemm_tn(s.m, s.n, s.k, at.data(), ldat, b.data(), ldb, d1.data(), ldc);
      err = 0.0;
      for (std::size_t i = 0; i < d0.size(); ++i) err = std::max(err, std::abs(d0[i] - d1[i]));
      CHECK(err <= 1e-13);
    }
  }
}
