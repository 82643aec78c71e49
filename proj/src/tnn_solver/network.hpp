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


#ifndef ANTISYM_SRC_TNN_SOLVER_NETWORK_HPP
#define ANTISYM_SRC_TNN_SOLVER_NETWORK_HPP

#include <vector>

#include "antisym/tnn_solver.hpp"

namespace antisym::detail {

// Forward state of one coordinate subnetwork on n nodes. h[l], t[l] and dz[l]
// are n x m row-major: activations, their r-derivatives, and the
// pre-activation derivatives.
struct ModeForward {
  std::vector<std::vector<double>> h, t, dz;
  std::vector<double> psi, dpsi;  // n x p
};

std::vector<ModeForward> forward(const TnnModel& model, const std::vector<double>& nodes);

/// Adds d(loss)/d(params of mode j) to grad given adjoints of psi and dpsi
/// (both n x p row-major).
void backward(const TnnModel& model, const std::vector<double>& nodes, int mode, const ModeForward& fwd,
              const std::vector<double>& psi_bar, const std::vector<double>& dpsi_bar, double* grad);

}  // namespace antisym::detail

#endif  // ANTISYM_SRC_TNN_SOLVER_NETWORK_HPP
