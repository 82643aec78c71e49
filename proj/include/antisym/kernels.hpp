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

#ifndef ANTISYM_KERNELS_HPP
#define ANTISYM_KERNELS_HPP

// Inner-loop arithmetic kernels used by the quadrature contractions and the
// network evaluation. Every kernel has a portable scalar reference version and,
// on x86-64, an AVX2+FMA version. The variant is chosen once at startup from
// CPUID; the ANTISYM_KERNELS environment variable ("scalar" or "avx2") forces
// a choice. All matrices are dense row-major with explicit leading dimensions.

#include <complex>
#include <cstddef>
#include <string_view>

namespace antisym::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  const char* name;

  /// sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);

  /// sum_i w[i] * x[i] * y[i]
  double (*wdot)(const double* w, const double* x, const double* y, std::size_t n);

  /// sum_i w[i] * conj(x[i]) * y[i]
  std::complex<double> (*zwdot)(const double* w, const std::complex<double>* x,
                                const std::complex<double>* y, std::size_t n);

  /// C[m x n] += A[m x k] * B[k x n]
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k, const double* a,
                  std::size_t lda, const double* b, std::size_t ldb, double* c,
                  std::size_t ldc);

  /// C[m x n] += A^T * B where A is stored [k x m] and B is [k x n]
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k, const double* a,
                  std::size_t lda, const double* b, std::size_t ldb, double* c,
                  std::size_t ldc);
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double wdot(const double* w, const double* x, const double* y, std::size_t n);
std::complex<double> zwdot(const double* w, const std::complex<double>* x,
                           const std::complex<double>* y, std::size_t n);
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             std::size_t lda, const double* b, std::size_t ldb, double* c,
             std::size_t ldc);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             std::size_t lda, const double* b, std::size_t ldb, double* c,
             std::size_t ldc);
}  // namespace scalar

#if defined(ANTISYM_HAVE_AVX2_KERNELS)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double wdot(const double* w, const double* x, const double* y, std::size_t n);
std::complex<double> zwdot(const double* w, const std::complex<double>* x,
                           const std::complex<double>* y, std::size_t n);
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             std::size_t lda, const double* b, std::size_t ldb, double* c,
             std::size_t ldc);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             std::size_t lda, const double* b, std::size_t ldb, double* c,
             std::size_t ldc);
}  // namespace avx2
#endif

/// Table for the scalar reference kernels.
const KernelTable& scalar_table() noexcept;

/// Table for the AVX2 kernels, or nullptr when they were not compiled in or
/// the host CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;

/// Parse "scalar" / "avx2"; returns false for anything else.
bool parse_backend(std::string_view name, Backend& out) noexcept;

}  // namespace antisym::kernels

#endif  // ANTISYM_KERNELS_HPP
