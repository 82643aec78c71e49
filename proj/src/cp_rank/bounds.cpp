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
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <algorithm>

#include "antisym/cp_rank.hpp"
#include "antisym/error.hpp"

namespace antisym {

namespace {

using u128 = unsigned __int128;

u128 checked_mul(u128 a, u128 b, const char* what) {
  u128 r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::Overflow, std::string(what) + ": integer overflow");
  return r;
}

u128 exact_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  u128 r = 1;
  for (int i = 1; i <= k; ++i) r = checked_mul(r, static_cast<u128>(n - k + i), "binomial") / static_cast<u128>(i);
  return r;
}

std::uint64_t narrow(u128 v, const char* what) {
  if (v > std::numeric_limits<std::uint64_t>::max())
    fail(ErrorKind::Overflow, std::string(what) + ": value exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

/// floor(N! * multiplier * 5^q / 6^q), q = floor(N/3).
u128 upper_expression(int order, u128 multiplier, const char* what) {
  u128 num = multiplier;
  for (int i = 2; i <= order; ++i) num = checked_mul(num, static_cast<u128>(i), what);
  u128 den = 1;
  for (int i = 0; i < order / 3; ++i) {
    num = checked_mul(num, 5, what);
    den *= 6;
  }
  return num / den;
}

constexpr int kMaxBoundOrder = 20;

void check_order(int order, const char* what) {
  if (order < 1) fail(ErrorKind::InvalidArgument, std::string(what) + ": N must be >= 1");
  if (order > kMaxBoundOrder)
    fail(ErrorKind::Overflow, std::string(what) + ": N = " + std::to_string(order) + " exceeds the supported maximum of 20");
}

}  // namespace

RankBounds det_rank_bounds(int order) {
  check_order(order, "det_rank_bounds");
  RankBounds b;
  b.lower = narrow(exact_binomial(order, order / 2), "det_rank_bounds");
  b.upper = narrow(upper_expression(order, 1, "det_rank_bounds"), "det_rank_bounds");
  return b;
}

RankBounds antisym_rank_bounds(int order, int dim) {
  check_order(order, "antisym_rank_bounds");
  if (dim < order)
    fail(ErrorKind::Trivial, "antisym_rank_bounds: K = " + std::to_string(dim) + " < N = " + std::to_string(order) +
                                 "; the only antisymmetric tensor is zero, so no rank bound applies");
  RankBounds b;
  b.lower = narrow(exact_binomial(order, order / 2), "antisym_rank_bounds");
  b.upper = narrow(upper_expression(order, exact_binomial(dim, order), "antisym_rank_bounds"), "antisym_rank_bounds");
  return b;
}

AsymptoticBound asymptotic_lower_bound(int order) {
  if (order < 1) fail(ErrorKind::InvalidArgument, "asymptotic_lower_bound: N must be >= 1");
  if (order > 62) fail(ErrorKind::Overflow, "asymptotic_lower_bound: N must be <= 62");
  AsymptoticBound a;
  a.exact = narrow(exact_binomial(order, order / 2), "asymptotic_lower_bound");
  a.asymptotic = std::ldexp(1.0, order) / std::sqrt(static_cast<double>(order));
  return a;
}

void write_rank_report(std::ostream& out, const RankReport& report) {
  out << "# lower=" << report.lower_bound << " upper=" << report.upper_bound
      << " heuristic=" << (report.heuristic ? "true" : "false") << '\n';
  out << "# estimated_rank=";
  if (report.estimated_rank)
    out << *report.estimated_rank;
  else
    out << "not_found";
  out << '\n';
  out << "rank,best_residual,restarts_used\n";
  char buf[64];
  for (const auto& [rank, residual] : report.residuals) {
    std::snprintf(buf, sizeof buf, "%.9e", residual);
    const auto it = report.restarts_used.find(rank);
    out << rank << ',' << buf << ',' << (it == report.restarts_used.end() ? 0 : it->second) << '\n';
  }
}

}  // namespace antisym
