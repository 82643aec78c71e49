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

#include "antisym/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "antisym/error.hpp"

namespace antisym {

namespace {

std::string join(std::span<const int> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

std::string join_dims(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

void require_cube(const DenseTensor& x, const char* op) {
  if (!x.equal_dims())
    fail(ErrorKind::DimensionMismatch,
         std::string(op) + ": all mode dimensions must be equal, got " + join_dims(x.dims()));
}

void require_cube(const CpDecomposition& cp, const char* op) {
  for (std::size_t d : cp.dims)
    if (d != cp.dims.front())
      fail(ErrorKind::DimensionMismatch,
           std::string(op) + ": all mode dimensions must be equal, got " + join_dims(cp.dims));
}

}  // namespace

// ---------------------------------------------------------------------------

int inversion_sign(std::span<const int> values) {
  int inversions = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] > values[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<Permutation> all_permutations(int n) {
  if (n < 0 || n > kMaxOrder)
    fail(ErrorKind::TooLarge, "all_permutations: order " + std::to_string(n) +
                                  " outside [0, " + std::to_string(kMaxOrder) + "]");
  std::vector<Permutation> out;
  out.reserve(factorial(n));
  Permutation current;
  current.image.resize(static_cast<std::size_t>(n));
  std::iota(current.image.begin(), current.image.end(), 1);
  out.push_back(current);

  std::vector<int> counter(static_cast<std::size_t>(n), 0);
  int i = 1;
  while (i < n) {
    auto ui = static_cast<std::size_t>(i);
    if (counter[ui] < i) {
      if (i % 2 == 0)
        std::swap(current.image[0], current.image[ui]);
      else
        std::swap(current.image[static_cast<std::size_t>(counter[ui])], current.image[ui]);
      current.sign = -current.sign;
      out.push_back(current);
      ++counter[ui];
      i = 1;
    } else {
      counter[ui] = 0;
      ++i;
    }
  }
  return out;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// ---------------------------------------------------------------------------

MultiIndex::MultiIndex(std::vector<int> entries, int dim) : entries_(std::move(entries)), dim_(dim) {
  if (entries_.empty())
    fail(ErrorKind::InvalidArgument, "multi-index must have at least one entry");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 1 || entries_[i] > dim_)
      fail(ErrorKind::InvalidArgument, "multi-index " + join(entries_) + " has entry outside [1, " +
                                           std::to_string(dim_) + "]");
    if (i > 0 && entries_[i] <= entries_[i - 1])
      fail(ErrorKind::InvalidArgument, "multi-index " + join(entries_) + " is not strictly increasing");
  }
}

std::string MultiIndex::to_string() const { return join(entries_); }

std::vector<MultiIndex> enumerate_multi_indices(int order, int dim) {
  std::vector<MultiIndex> out;
  if (order < 1 || dim < order) return out;
  std::vector<int> k(static_cast<std::size_t>(order));
  std::iota(k.begin(), k.end(), 1);
  while (true) {
    out.emplace_back(k, dim);
    int pos = order - 1;
    while (pos >= 0 && k[static_cast<std::size_t>(pos)] == dim - (order - 1 - pos)) --pos;
    if (pos < 0) break;
    ++k[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < order; ++j)
      k[static_cast<std::size_t>(j)] = k[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

DenseTensor::DenseTensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.size() > static_cast<std::size_t>(kMaxOrder))
    fail(ErrorKind::TooLarge, "tensor order must lie in [1, 8], got " + std::to_string(dims_.size()));
  std::size_t total = 1;
  for (std::size_t d : dims_) {
    if (d == 0) fail(ErrorKind::InvalidArgument, "tensor dimensions must be positive");
    if (total > kMaxEntries / d)
      fail(ErrorKind::TooLarge, "tensor with dims " + join_dims(dims_) + " exceeds 1e7 entries");
    total *= d;
  }
  init_strides();
  data_.assign(total, Complex{});
}

DenseTensor::DenseTensor(std::vector<std::size_t> dims, ComplexVector data)
    : DenseTensor(std::move(dims)) {
  if (data.size() != data_.size())
    fail(ErrorKind::DimensionMismatch, "tensor data has " + std::to_string(data.size()) +
                                           " entries, dims require " + std::to_string(data_.size()));
  data_ = std::move(data);
}

DenseTensor DenseTensor::cube(int order, std::size_t dim) {
  if (order < 1) fail(ErrorKind::InvalidArgument, "tensor order must be positive");
  return DenseTensor(std::vector<std::size_t>(static_cast<std::size_t>(order), dim));
}

void DenseTensor::init_strides() {
  strides_.assign(dims_.size(), 1);
  for (std::size_t j = dims_.size(); j-- > 1;) strides_[j - 1] = strides_[j] * dims_[j];
}

bool DenseTensor::equal_dims() const noexcept {
  return std::all_of(dims_.begin(), dims_.end(), [&](std::size_t d) { return d == dims_.front(); });
}

std::size_t DenseTensor::offset(std::span<const int> index) const {
  std::size_t off = 0;
  for (std::size_t j = 0; j < dims_.size(); ++j)
    off += static_cast<std::size_t>(index[j] - 1) * strides_[j];
  return off;
}

void DenseTensor::unravel(std::size_t flat, std::span<int> index) const {
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    index[j] = static_cast<int>(flat / strides_[j]) + 1;
    flat %= strides_[j];
  }
}

Complex& DenseTensor::at(std::span<const int> index) {
  return const_cast<Complex&>(static_cast<const DenseTensor&>(*this).at(index));
}

const Complex& DenseTensor::at(std::span<const int> index) const {
  if (index.size() != dims_.size())
    fail(ErrorKind::DimensionMismatch, "index " + join(index) + " has wrong arity for order " +
                                           std::to_string(dims_.size()));
  for (std::size_t j = 0; j < dims_.size(); ++j)
    if (index[j] < 1 || static_cast<std::size_t>(index[j]) > dims_[j])
      fail(ErrorKind::InvalidArgument, "index " + join(index) + " out of range for dims " + join_dims(dims_));
  return data_[offset(index)];
}

double DenseTensor::max_abs() const noexcept {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double DenseTensor::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool DenseTensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (dims_ != other.dims_) fail(ErrorKind::DimensionMismatch, "tensor addition: dims differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  if (dims_ != other.dims_) fail(ErrorKind::DimensionMismatch, "tensor subtraction: dims differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(Complex s) noexcept {
  for (Complex& z : data_) z *= s;
  return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(Complex s, DenseTensor a) { return a *= s; }

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims() != b.dims())
    fail(ErrorKind::DimensionMismatch, "max_abs_diff: dims " + join_dims(a.dims()) + " vs " + join_dims(b.dims()));
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// ---------------------------------------------------------------------------

void CpDecomposition::validate() const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].size() != dims.size())
      fail(ErrorKind::DimensionMismatch, "CP term " + std::to_string(i + 1) + " has " +
                                             std::to_string(terms[i].size()) + " factors, order is " +
                                             std::to_string(dims.size()));
    for (std::size_t j = 0; j < dims.size(); ++j)
      if (terms[i][j].size() != dims[j])
        fail(ErrorKind::DimensionMismatch, "CP factor (" + std::to_string(i + 1) + "," +
                                               std::to_string(j + 1) + ") has length " +
                                               std::to_string(terms[i][j].size()) + ", mode dim is " +
                                               std::to_string(dims[j]));
  }
}

void CpDecomposition::add_term(std::vector<ComplexVector> factors) {
  terms.push_back(std::move(factors));
  try {
    validate();
  } catch (...) {
    terms.pop_back();
    throw;
  }
}

DenseTensor dense_from_cp(const CpDecomposition& cp) {
  cp.validate();
  DenseTensor out(cp.dims);
  const int n = cp.order();
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (const auto& term : cp.terms) {
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      out.unravel(flat, idx);
      Complex v = 1.0;
      for (int j = 0; j < n; ++j) v *= term[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(j)] - 1)];
      out.data()[flat] += v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

DenseTensor antisymmetrize(const DenseTensor& x) {
  require_cube(x, "antisymmetrize");
  const int n = x.order();
  const int dim = static_cast<int>(x.dim(0));
  DenseTensor out(x.dims());
  const auto perms = all_permutations(n);
  const double inv = 1.0 / static_cast<double>(factorial(n));
  std::vector<int> idx(static_cast<std::size_t>(n));
  // Entries with a repeated coordinate vanish; every other entry is a signed
  // copy of the projected value at its sorted representative.
  for (const MultiIndex& k : enumerate_multi_indices(n, dim)) {
    Complex c{};
    for (const Permutation& p : perms) {
      for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = k[static_cast<std::size_t>(p(j + 1) - 1)];
      c += static_cast<double>(p.sign) * x.data()[x.offset(idx)];
    }
    c *= inv;
    for (const Permutation& p : perms) {
      for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = k[static_cast<std::size_t>(p(j + 1) - 1)];
      out.data()[out.offset(idx)] = static_cast<double>(p.sign) * c;
    }
  }
  return out;
}

CpDecomposition antisymmetrize_cp(const CpDecomposition& cp) {
  cp.validate();
  require_cube(cp, "antisymmetrize_cp");
  const int n = cp.order();
  const auto perms = all_permutations(n);
  const double inv = 1.0 / static_cast<double>(factorial(n));
  CpDecomposition out(cp.dims);
  out.terms.reserve(cp.terms.size() * perms.size());
  for (const auto& term : cp.terms) {
    for (const Permutation& p : perms) {
      std::vector<ComplexVector> factors;
      factors.reserve(static_cast<std::size_t>(n));
      for (int j = 1; j <= n; ++j) factors.push_back(term[static_cast<std::size_t>(p(j) - 1)]);
      const double scale = static_cast<double>(p.sign) * inv;
      for (Complex& z : factors.front()) z *= scale;
      out.terms.push_back(std::move(factors));
    }
  }
  return out;
}

DenseTensor basis_tensor(const MultiIndex& k, int dim) {
  if (k.dim() != dim)
    // Revalidate against the requested dimension.
    (void)MultiIndex(k.entries(), dim);
  const int n = k.order();
  DenseTensor out = DenseTensor::cube(n, static_cast<std::size_t>(dim));
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (const Permutation& p : all_permutations(n)) {
    for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = k[static_cast<std::size_t>(p(j + 1) - 1)];
    out.data()[out.offset(idx)] = static_cast<double>(p.sign);
  }
  return out;
}

DenseTensor determinant_tensor(int order) {
  if (order < 1) fail(ErrorKind::InvalidArgument, "determinant_tensor: order must be >= 1");
  std::vector<int> k(static_cast<std::size_t>(order));
  std::iota(k.begin(), k.end(), 1);
  return basis_tensor(MultiIndex(std::move(k), order), order);
}

AntisymmetryViolation antisymmetry_violation(const DenseTensor& x) {
  require_cube(x, "antisymmetry check");
  AntisymmetryViolation worst;
  const double scale = x.max_abs();
  if (scale == 0.0) return worst;
  const auto n = static_cast<std::size_t>(x.order());
  std::vector<int> idx(n), sorted(n);
  for (std::size_t flat = 0; flat < x.size(); ++flat) {
    x.unravel(flat, idx);
    sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    const bool repeated = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    double err;
    if (repeated) {
      err = std::abs(x.data()[flat]);
    } else {
      const double s = inversion_sign(idx);
      err = std::abs(x.data()[flat] - s * x.data()[x.offset(sorted)]);
    }
    err /= scale;
    if (err > worst.relative_error) {
      worst.relative_error = err;
      worst.entry = idx;
      worst.partner = sorted;
    }
  }
  return worst;
}

std::map<MultiIndex, Complex> antisym_expand(const DenseTensor& x) {
  const AntisymmetryViolation v = antisymmetry_violation(x);
  if (v.relative_error > kAntisymmetryTolerance) {
    std::ostringstream msg;
    msg << "antisym_expand: tensor is not antisymmetric; worst violation " << v.relative_error
        << " (relative) between entries " << join(v.entry) << " and " << join(v.partner);
    fail(ErrorKind::NotAntisymmetric, msg.str());
  }
  std::map<MultiIndex, Complex> out;
  for (MultiIndex& k : enumerate_multi_indices(x.order(), static_cast<int>(x.dim(0)))) {
    const Complex c = x.at(std::span<const int>(k.entries()));
    out.emplace(std::move(k), c);
  }
  return out;
}

DenseTensor antisym_reconstruct(const std::map<MultiIndex, Complex>& coeffs, int order, int dim) {
  DenseTensor out = DenseTensor::cube(order, static_cast<std::size_t>(dim));
  for (const auto& [k, c] : coeffs) {
    if (k.order() != order)
      fail(ErrorKind::DimensionMismatch, "antisym_reconstruct: multi-index " + k.to_string() +
                                             " has wrong order");
    out += c * basis_tensor(k, dim);
  }
  return out;
}

DenseTensor support_restrict(const DenseTensor& x, const MultiIndex& k) {
  require_cube(x, "support_restrict");
  const int dim = static_cast<int>(x.dim(0));
  if (k.order() != x.order())
    fail(ErrorKind::DimensionMismatch, "support_restrict: multi-index order differs from tensor order");
  (void)MultiIndex(k.entries(), dim);
  std::vector<bool> keep(static_cast<std::size_t>(dim) + 1, false);
  for (int e : k.entries()) keep[static_cast<std::size_t>(e)] = true;
  DenseTensor out = x;
  std::vector<int> idx(static_cast<std::size_t>(x.order()));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    out.unravel(flat, idx);
    for (int e : idx)
      if (!keep[static_cast<std::size_t>(e)]) {
        out.data()[flat] = 0.0;
        break;
      }
  }
  return out;
}

CpDecomposition embed_cp(const CpDecomposition& cp, const MultiIndex& k, int dim) {
  cp.validate();
  (void)MultiIndex(k.entries(), dim);
  const auto n = static_cast<std::size_t>(k.order());
  for (std::size_t d : cp.dims)
    if (d != n)
      fail(ErrorKind::DimensionMismatch, "embed_cp: factor length " + std::to_string(d) +
                                             " differs from multi-index length " + std::to_string(n));
  CpDecomposition out(std::vector<std::size_t>(cp.dims.size(), static_cast<std::size_t>(dim)));
  for (const auto& term : cp.terms) {
    std::vector<ComplexVector> factors;
    for (const ComplexVector& v : term) {
      ComplexVector e(static_cast<std::size_t>(dim), Complex{});
      for (std::size_t l = 0; l < n; ++l) e[static_cast<std::size_t>(k[l] - 1)] = v[l];
      factors.push_back(std::move(e));
    }
    out.terms.push_back(std::move(factors));
  }
  return out;
}

CpDecomposition restrict_cp(const CpDecomposition& cp, const MultiIndex& k) {
  cp.validate();
  const auto n = static_cast<std::size_t>(k.order());
  for (std::size_t d : cp.dims)
    if (d != static_cast<std::size_t>(k.dim()))
      fail(ErrorKind::DimensionMismatch, "restrict_cp: factor length " + std::to_string(d) +
                                             " differs from multi-index dimension " + std::to_string(k.dim()));
  CpDecomposition out(std::vector<std::size_t>(cp.dims.size(), n));
  for (const auto& term : cp.terms) {
    std::vector<ComplexVector> factors;
    for (const ComplexVector& v : term) {
      ComplexVector r(n);
      for (std::size_t l = 0; l < n; ++l) r[l] = v[static_cast<std::size_t>(k[l] - 1)];
      factors.push_back(std::move(r));
    }
    out.terms.push_back(std::move(factors));
  }
  return out;
}

}  // namespace antisym
