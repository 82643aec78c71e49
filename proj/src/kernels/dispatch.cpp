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

#include <cstdlib>

#include "antisym/kernels.hpp"

namespace antisym::kernels {

namespace {

const KernelTable kScalar{Backend::Scalar, "scalar",       &scalar::dot,
                          &scalar::wdot,   &scalar::zwdot, &scalar::gemm_nn,
                          &scalar::gemm_tn};

#if defined(ANTISYM_HAVE_AVX2_KERNELS)
const KernelTable kAvx2{Backend::Avx2, "avx2",       &avx2::dot,
                        &avx2::wdot,   &avx2::zwdot, &avx2::gemm_nn,
                        &avx2::gemm_tn};

bool host_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() noexcept {
  const KernelTable* fast = avx2_table();
  if (const char* env = std::getenv("ANTISYM_KERNELS")) {
    Backend wanted;
    if (parse_backend(env, wanted)) {
      if (wanted == Backend::Scalar) return kScalar;
      if (fast != nullptr) return *fast;
    }
  }
  return fast != nullptr ? *fast : kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(ANTISYM_HAVE_AVX2_KERNELS)
  static const bool ok = host_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

bool parse_backend(std::string_view name, Backend& out) noexcept {
  if (name == "scalar") {
    out = Backend::Scalar;
    return true;
  }
  if (name == "avx2") {
    out = Backend::Avx2;
    return true;
  }
  return false;
}

}  // namespace antisym::kernels
