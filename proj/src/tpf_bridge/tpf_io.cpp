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


#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "antisym/error.hpp"
#include "antisym/tpf_bridge.hpp"

namespace antisym {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(int lineno, const std::string& what) {
  fail(ErrorKind::Parse, "tpf file line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

void write_tpf(std::ostream& out, const CpDecomposition& cp) {
  cp.validate();
  if (cp.order() < 1) fail(ErrorKind::InvalidArgument, "write_tpf: decomposition has no modes");
  for (std::size_t d : cp.dims)
    if (d != cp.dims.front()) fail(ErrorKind::DimensionMismatch, "write_tpf: modes must share one basis size");
  out << "tpf " << cp.order() << ' ' << cp.dims.front() << ' ' << cp.rank() << '\n';
  for (const auto& term : cp.terms) {
    for (const auto& v : term) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out << ' ';
        out << format_double(v[k].real()) << ' ' << format_double(v[k].imag());
      }
      out << '\n';
    }
  }
}

CpDecomposition read_tpf(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) fail(ErrorKind::Parse, "tpf file: missing header");
  std::istringstream header(line);
  std::string tag, extra;
  long long n = 0, k = 0, p = -1;
  header >> tag >> n >> k >> p;
  if (tag != "tpf" || !header || n < 1 || n > kMaxOrder || k < 1 || p < 0)
    parse_fail(lineno, "expected 'tpf N K p'");
  if (header >> extra) parse_fail(lineno, "trailing data after header");
  CpDecomposition cp(std::vector<std::size_t>(static_cast<std::size_t>(n), static_cast<std::size_t>(k)));
  for (long long i = 0; i < p; ++i) {
    std::vector<ComplexVector> factors;
    for (long long j = 0; j < n; ++j) {
      if (!next_content_line(in, line, lineno))
        fail(ErrorKind::Parse, "tpf file: expected " + std::to_string(p * n) + " factor lines");
      std::istringstream row(line);
      ComplexVector v(static_cast<std::size_t>(k));
      for (auto& z : v) {
        double re = 0.0, im = 0.0;
        if (!(row >> re >> im)) parse_fail(lineno, "expected " + std::to_string(k) + " 're im' pairs");
        z = Complex(re, im);
      }
      if (row >> extra) parse_fail(lineno, "trailing data");
      factors.push_back(std::move(v));
    }
    cp.terms.push_back(std::move(factors));
  }
  if (next_content_line(in, line, lineno)) parse_fail(lineno, "unexpected extra factor line");
  return cp;
}

}  // namespace antisym
