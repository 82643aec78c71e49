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

#include "antisym/error.hpp"

namespace antisym {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::NotAntisymmetric: return "not antisymmetric";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::TooLarge: return "too large";
    case ErrorKind::Trivial: return "trivial";
    case ErrorKind::NumericFailure: return "numeric failure";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Diverged: return "diverged";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Io: return "io error";
  }
  return "unknown";
}

}  // namespace antisym
