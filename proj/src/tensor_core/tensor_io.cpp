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
#include <set>
#include <sstream>
#include <string>

#include "antisym/error.hpp"
#include "antisym/tensor_core.hpp"

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

}  // namespace

void write_tensor(std::ostream& out, const DenseTensor& x) {
  out << "tensor " << x.order();
  for (std::size_t d : x.dims()) out << ' ' << d;
  out << '\n';
  std::vector<int> idx(static_cast<std::size_t>(x.order()));
  // Row-major flat order is lexicographic order of the 1-based index.
  for (std::size_t flat = 0; flat < x.size(); ++flat) {
    const Complex z = x.data()[flat];
    if (z == Complex{}) continue;
    x.unravel(flat, idx);
    for (int k : idx) out << k << ' ';
    out << format_double(z.real()) << ' ' << format_double(z.imag()) << '\n';
  }
}

DenseTensor read_tensor(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) fail(ErrorKind::Parse, "tensor file: missing header");
  std::istringstream header(line);
  std::string tag;
  int order = 0;
  header >> tag >> order;
  if (tag != "tensor" || !header || order < 1)
    fail(ErrorKind::Parse, "tensor file line " + std::to_string(lineno) + ": expected 'tensor N K_1 ... K_N'");
  std::vector<std::size_t> dims(static_cast<std::size_t>(order));
  for (auto& d : dims) {
    long long v = 0;
    if (!(header >> v) || v < 1)
      fail(ErrorKind::Parse, "tensor file line " + std::to_string(lineno) + ": bad dimension");
    d = static_cast<std::size_t>(v);
  }
  DenseTensor x(dims);
  std::set<std::size_t> seen;
  std::vector<int> idx(static_cast<std::size_t>(order));
  while (next_content_line(in, line, lineno)) {
    std::istringstream row(line);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (!(row >> idx[j]) || idx[j] < 1 || static_cast<std::size_t>(idx[j]) > dims[j])
        fail(ErrorKind::Parse, "tensor file line " + std::to_string(lineno) + ": bad index");
    }
    double re = 0.0, im = 0.0;
    if (!(row >> re >> im))
      fail(ErrorKind::Parse, "tensor file line " + std::to_string(lineno) + ": expected 're im'");
    std::string extra;
    if (row >> extra) fail(ErrorKind::Parse, "tensor file line " + std::to_string(lineno) + ": trailing data");
    const std::size_t off = x.offset(idx);
    if (!seen.insert(off).second)
      fail(ErrorKind::Parse, "tensor file line " + std::to_string(lineno) + ": duplicate entry");
    x.data()[off] = Complex(re, im);
  }
  return x;
}

}  // namespace antisym
