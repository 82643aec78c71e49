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

#ifndef ANTISYM_ERROR_HPP
#define ANTISYM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace antisym {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  NotAntisymmetric,
  Overflow,
  TooLarge,
  Trivial,        // K < N: only the zero antisymmetric tensor exists
  NumericFailure, // singular solve, non-finite values
  Degenerate,     // vanishing norm of an ansatz
  Diverged,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// All library failures are reported through this type. The kind lets
/// callers (and the CLI exit-code mapping) react without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace antisym

#endif  // ANTISYM_ERROR_HPP
