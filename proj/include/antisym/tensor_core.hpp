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

#ifndef ANTISYM_TENSOR_CORE_HPP
#define ANTISYM_TENSOR_CORE_HPP

// Dense complex tensors, the antisymmetrizer, the antisymmetric basis
// {E_k : k strictly increasing} and CP-format plumbing.
//
// Index convention: every public index (tensor entries, multi-indices,
// permutation images) is 1-based. Storage is row-major with the last mode
// varying fastest.

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace antisym {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr int kMaxOrder = 8;
inline constexpr std::size_t kMaxEntries = 10'000'000;

// ---------------------------------------------------------------------------
// Permutations

struct Permutation {
  std::vector<int> image;  // image[j-1] = pi(j), values in 1..N
  int sign = 1;

  int size() const noexcept { return static_cast<int>(image.size()); }
  int operator()(int j) const { return image[static_cast<std::size_t>(j - 1)]; }
};

/// Parity by inversion count: +1 for even, -1 for odd. Values may be any
/// distinct integers; only their relative order matters.
int inversion_sign(std::span<const int> values);

/// All N! permutations of {1..N}, generated by Heap's algorithm with the sign
/// tracked incrementally (each transposition flips it). The identity comes
/// first. Requires 0 <= N <= kMaxOrder.
std::vector<Permutation> all_permutations(int n);

std::uint64_t factorial(int n);

// ---------------------------------------------------------------------------
// Multi-indices

/// Strictly increasing 1-based index tuple (k_1 < ... < k_N <= K).
class MultiIndex {
 public:
  MultiIndex() = default;
  /// Throws Error(InvalidArgument) unless 1 <= k_1 < ... < k_N <= dim.
  MultiIndex(std::vector<int> entries, int dim);

  int order() const noexcept { return static_cast<int>(entries_.size()); }
  int dim() const noexcept { return dim_; }
  const std::vector<int>& entries() const noexcept { return entries_; }
  int operator[](std::size_t i) const { return entries_[i]; }

  std::string to_string() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ == b.entries_;
  }
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<int> entries_;
  int dim_ = 0;
};

/// The set of all strictly increasing N-tuples in {1..K}, lexicographic.
/// Empty when K < N.
std::vector<MultiIndex> enumerate_multi_indices(int order, int dim);

std::uint64_t binomial(int n, int k);

// ---------------------------------------------------------------------------
// Dense tensors

class DenseTensor {
 public:
  DenseTensor() = default;
  /// Zero tensor with the given mode dimensions. Enforces 1 <= order <= 8,
  /// positive dims and at most kMaxEntries entries.
  explicit DenseTensor(std::vector<std::size_t> dims);
  DenseTensor(std::vector<std::size_t> dims, ComplexVector data);

  /// Order-N tensor with every mode of size dim.
  static DenseTensor cube(int order, std::size_t dim);

  int order() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(int mode) const { return dims_[static_cast<std::size_t>(mode)]; }
  std::size_t size() const noexcept { return data_.size(); }
  bool equal_dims() const noexcept;

  /// 1-based element access.
  Complex& at(std::span<const int> index);
  const Complex& at(std::span<const int> index) const;
  Complex& at(std::initializer_list<int> index) {
    return at(std::span<const int>(index.begin(), index.size()));
  }
  const Complex& at(std::initializer_list<int> index) const {
    return at(std::span<const int>(index.begin(), index.size()));
  }

  /// Flat storage access (row-major, 0-based).
  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  /// 0-based flat offset of a 1-based index; no bounds check beyond debug.
  std::size_t offset(std::span<const int> index) const;
  /// Inverse of offset(): writes the 1-based index of a flat position.
  void unravel(std::size_t flat, std::span<int> index) const;

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(Complex s) noexcept;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  ComplexVector data_;

  void init_strides();
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(Complex s, DenseTensor a);

/// max_i |a_i - b_i|; throws on dimension mismatch.
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

// ---------------------------------------------------------------------------
// CP decompositions

/// Sum of `rank()` outer products. terms[i][j] is the mode-j factor vector of
/// term i and has length dims[j]. Rank 0 is the zero tensor.
struct CpDecomposition {
  std::vector<std::size_t> dims;
  std::vector<std::vector<ComplexVector>> terms;

  CpDecomposition() = default;
  explicit CpDecomposition(std::vector<std::size_t> mode_dims) : dims(std::move(mode_dims)) {}

  int order() const noexcept { return static_cast<int>(dims.size()); }
  int rank() const noexcept { return static_cast<int>(terms.size()); }

  /// Throws Error(DimensionMismatch) if any factor has the wrong length or a
  /// term has the wrong number of factors.
  void validate() const;

  void add_term(std::vector<ComplexVector> factors);
};

DenseTensor dense_from_cp(const CpDecomposition& cp);

// ---------------------------------------------------------------------------
// Antisymmetric structure

/// (1/N!) sum_pi sgn(pi) X(k_pi(1), ..., k_pi(N)). Requires equal mode dims.
DenseTensor antisymmetrize(const DenseTensor& x);

/// Projection of a CP form: for each term and each permutation, the permuted
/// factor tuple with sgn(pi)/N! folded into the first factor. Returns
/// rank * N! terms.
CpDecomposition antisymmetrize_cp(const CpDecomposition& cp);

/// +1 / -1 on even / odd rearrangements of k, zero elsewhere.
DenseTensor basis_tensor(const MultiIndex& k, int dim);

/// basis_tensor((1..N), N).
DenseTensor determinant_tensor(int order);

/// Largest deviation from antisymmetry relative to max|X|, together with the
/// offending entry and its sorted partner (both 1-based).
struct AntisymmetryViolation {
  double relative_error = 0.0;
  std::vector<int> entry;
  std::vector<int> partner;
};
AntisymmetryViolation antisymmetry_violation(const DenseTensor& x);

inline constexpr double kAntisymmetryTolerance = 1e-10;

/// Coefficients c_k = X(k_1, ..., k_N) for every k in the multi-index set.
/// Throws Error(NotAntisymmetric) naming the worst index pair if X deviates
/// from antisymmetry by more than 1e-10 relative to max|X|.
std::map<MultiIndex, Complex> antisym_expand(const DenseTensor& x);

/// sum_k c_k E_k for the given coefficients.
DenseTensor antisym_reconstruct(const std::map<MultiIndex, Complex>& coeffs,
                                int order, int dim);

/// Keeps entries whose every coordinate lies in {k_1..k_N}; zeros the rest.
DenseTensor support_restrict(const DenseTensor& x, const MultiIndex& k);

/// Maps each C^N factor into C^K, placing entry l at position k_l.
CpDecomposition embed_cp(const CpDecomposition& cp, const MultiIndex& k, int dim);

/// Selects entries k_1..k_N of each C^K factor.
CpDecomposition restrict_cp(const CpDecomposition& cp, const MultiIndex& k);

// ---------------------------------------------------------------------------
// Text format
//
//   tensor N K_1 ... K_N
//   k_1 ... k_N re im        (one line per nonzero, 1-based)
//
// Writers emit nonzeros in lexicographic index order. Readers accept any
// order and reject duplicates.

void write_tensor(std::ostream& out, const DenseTensor& x);
DenseTensor read_tensor(std::istream& in);

}  // namespace antisym

#endif  // ANTISYM_TENSOR_CORE_HPP
