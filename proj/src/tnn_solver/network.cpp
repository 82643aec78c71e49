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


#include "network.hpp"

#include <cmath>
#include <random>

#include "antisym/error.hpp"
#include "antisym/kernels.hpp"

namespace antisym {

void TnnArch::validate() const {
  if (n_modes < 1 || rank < 1 || hidden_layers < 1 || width < 1)
    fail(ErrorKind::InvalidArgument, "TNN architecture needs positive N, p, L and m");
}

std::size_t TnnArch::params_per_mode() const noexcept {
  const auto m = static_cast<std::size_t>(width), p = static_cast<std::size_t>(rank);
  return (m + m) + static_cast<std::size_t>(hidden_layers - 1) * (m * m + m) + (m * p + p);
}

int TnnModel::fan_in(int layer) const noexcept { return layer == 0 ? 1 : arch.width; }

int TnnModel::fan_out(int layer) const noexcept { return layer == arch.hidden_layers ? arch.rank : arch.width; }

std::size_t TnnModel::weight_offset(int mode, int layer) const {
  std::size_t off = static_cast<std::size_t>(mode) * arch.params_per_mode();
  for (int l = 0; l < layer; ++l)
    off += static_cast<std::size_t>(fan_in(l) + 1) * static_cast<std::size_t>(fan_out(l));
  return off;
}

std::size_t TnnModel::bias_offset(int mode, int layer) const {
  return weight_offset(mode, layer) + static_cast<std::size_t>(fan_in(layer)) * static_cast<std::size_t>(fan_out(layer));
}

void TnnModel::validate() const {
  arch.validate();
  if (params.size() != arch.param_count())
    fail(ErrorKind::DimensionMismatch, "TNN model has " + std::to_string(params.size()) + " parameters, expected " +
                                           std::to_string(arch.param_count()));
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!std::isfinite(params[i])) fail(ErrorKind::NumericFailure, "TNN parameter " + std::to_string(i) + " is not finite");
}

TnnModel tnn_init(const TnnArch& arch, std::uint64_t seed) {
  arch.validate();
  TnnModel m{arch, std::vector<double>(arch.param_count())};
  std::mt19937_64 rng(seed);
  for (int j = 0; j < arch.n_modes; ++j) {
    for (int l = 0; l <= arch.hidden_layers; ++l) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(m.fan_in(l)));
      std::uniform_real_distribution<double> u(-bound, bound);
      const std::size_t begin = m.weight_offset(j, l);
      const std::size_t end = m.bias_offset(j, l) + static_cast<std::size_t>(m.fan_out(l));
      for (std::size_t i = begin; i < end; ++i) m.params[i] = u(rng);
    }
  }
  return m;
}

TnnModel tnn_zero_init(const TnnArch& arch, double output_bias) {
  arch.validate();
  TnnModel m{arch, std::vector<double>(arch.param_count(), 0.0)};
  for (int j = 0; j < arch.n_modes; ++j) {
    const std::size_t b = m.bias_offset(j, arch.hidden_layers);
    for (int i = 0; i < arch.rank; ++i) m.params[b + static_cast<std::size_t>(i)] = output_bias;
  }
  return m;
}

namespace detail {

std::vector<ModeForward> forward(const TnnModel& model, const std::vector<double>& nodes) {
  const auto& k = kernels::active();
  const TnnArch& a = model.arch;
  const std::size_t n = nodes.size();
  const auto m = static_cast<std::size_t>(a.width), p = static_cast<std::size_t>(a.rank);
  const bool tanh_act = a.activation == Activation::Tanh;
  const std::vector<double> ones(n, 1.0);
  std::vector<ModeForward> out(static_cast<std::size_t>(a.n_modes));
  for (int j = 0; j < a.n_modes; ++j) {
    ModeForward& f = out[static_cast<std::size_t>(j)];
    const double* h_prev = nodes.data();
    const double* t_prev = ones.data();
    std::size_t in = 1;
    for (int l = 0; l < a.hidden_layers; ++l) {
      const double* w = model.params.data() + model.weight_offset(j, l);
      const double* b = model.params.data() + model.bias_offset(j, l);
      std::vector<double> z(n * m), dz(n * m, 0.0);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t o = 0; o < m; ++o) z[x * m + o] = b[o];
      k.gemm_nn(n, m, in, h_prev, in, w, m, z.data(), m);
      k.gemm_nn(n, m, in, t_prev, in, w, m, dz.data(), m);
      std::vector<double> h(n * m), t(n * m);
      for (std::size_t e = 0; e < n * m; ++e) {
        if (tanh_act) {
          h[e] = std::tanh(z[e]);
          t[e] = (1.0 - h[e] * h[e]) * dz[e];
        } else {
          h[e] = z[e];
          t[e] = dz[e];
        }
      }
      f.h.push_back(std::move(h));
      f.t.push_back(std::move(t));
      f.dz.push_back(std::move(dz));
      h_prev = f.h.back().data();
      t_prev = f.t.back().data();
      in = m;
    }
    const double* w = model.params.data() + model.weight_offset(j, a.hidden_layers);
    const double* b = model.params.data() + model.bias_offset(j, a.hidden_layers);
    f.psi.assign(n * p, 0.0);
    f.dpsi.assign(n * p, 0.0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t i = 0; i < p; ++i) f.psi[x * p + i] = b[i];
    k.gemm_nn(n, p, m, h_prev, m, w, p, f.psi.data(), p);
    k.gemm_nn(n, p, m, t_prev, m, w, p, f.dpsi.data(), p);
  }
  return out;
}

namespace {

std::vector<double> transpose(const double* a, std::size_t rows, std::size_t cols) {
  std::vector<double> t(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = a[r * cols + c];
  return t;
}

void add_column_sums(const std::vector<double>& a, std::size_t rows, std::size_t cols, double* out) {
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c] += a[r * cols + c];
}

}  // namespace

void backward(const TnnModel& model, const std::vector<double>& nodes, int mode, const ModeForward& fwd,
              const std::vector<double>& psi_bar, const std::vector<double>& dpsi_bar, double* grad) {
  const auto& k = kernels::active();
  const TnnArch& a = model.arch;
  const std::size_t n = nodes.size();
  const auto m = static_cast<std::size_t>(a.width), p = static_cast<std::size_t>(a.rank);
  const int L = a.hidden_layers;
  const bool tanh_act = a.activation == Activation::Tanh;
  const std::vector<double> ones(n, 1.0);

  // Output layer: psi = h W + b, dpsi = t W.
  {
    double* gw = grad + model.weight_offset(mode, L);
    double* gb = grad + model.bias_offset(mode, L);
    k.gemm_tn(m, p, n, fwd.h[static_cast<std::size_t>(L - 1)].data(), m, psi_bar.data(), p, gw, p);
    k.gemm_tn(m, p, n, fwd.t[static_cast<std::size_t>(L - 1)].data(), m, dpsi_bar.data(), p, gw, p);
    add_column_sums(psi_bar, n, p, gb);
  }
  const auto wt_out = transpose(model.params.data() + model.weight_offset(mode, L), m, p);
  std::vector<double> h_bar(n * m, 0.0), t_bar(n * m, 0.0);
  k.gemm_nn(n, m, p, psi_bar.data(), p, wt_out.data(), m, h_bar.data(), m);
  k.gemm_nn(n, m, p, dpsi_bar.data(), p, wt_out.data(), m, t_bar.data(), m);

  for (int l = L - 1; l >= 0; --l) {
    const auto& h = fwd.h[static_cast<std::size_t>(l)];
    const auto& dz = fwd.dz[static_cast<std::size_t>(l)];
    std::vector<double> z_bar(n * m), dz_bar(n * m);
    for (std::size_t e = 0; e < n * m; ++e) {
      if (tanh_act) {
        const double s1 = 1.0 - h[e] * h[e];
        const double s2 = -2.0 * h[e] * s1;
        z_bar[e] = h_bar[e] * s1 + t_bar[e] * dz[e] * s2;
        dz_bar[e] = t_bar[e] * s1;
      } else {
        z_bar[e] = h_bar[e];
        dz_bar[e] = t_bar[e];
      }
    }
    const std::size_t in = l == 0 ? 1 : m;
    const double* h_prev = l == 0 ? nodes.data() : fwd.h[static_cast<std::size_t>(l - 1)].data();
    const double* t_prev = l == 0 ? ones.data() : fwd.t[static_cast<std::size_t>(l - 1)].data();
    double* gw = grad + model.weight_offset(mode, l);
    double* gb = grad + model.bias_offset(mode, l);
    k.gemm_tn(in, m, n, h_prev, in, z_bar.data(), m, gw, m);
    k.gemm_tn(in, m, n, t_prev, in, dz_bar.data(), m, gw, m);
    add_column_sums(z_bar, n, m, gb);
    if (l == 0) break;
    const auto wt = transpose(model.params.data() + model.weight_offset(mode, l), m, m);
    std::fill(h_bar.begin(), h_bar.end(), 0.0);
    std::fill(t_bar.begin(), t_bar.end(), 0.0);
    k.gemm_nn(n, m, m, z_bar.data(), m, wt.data(), m, h_bar.data(), m);
    k.gemm_nn(n, m, m, dz_bar.data(), m, wt.data(), m, t_bar.data(), m);
  }
}

}  // namespace detail

SeparableFunction tnn_eval_modes(const TnnModel& model, const QuadratureGrid& grid) {
  model.validate();
  const auto fwd = detail::forward(model, grid.nodes);
  const TnnArch& a = model.arch;
  const std::size_t n = grid.size(), p = static_cast<std::size_t>(a.rank);
  SeparableFunction f;
  f.rank = a.rank;
  f.order = a.n_modes;
  f.values.assign(p, std::vector<ComplexVector>(static_cast<std::size_t>(a.n_modes), ComplexVector(n)));
  f.derivs = f.values;
  for (std::size_t j = 0; j < fwd.size(); ++j)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t i = 0; i < p; ++i) {
        f.values[i][j][x] = fwd[j].psi[x * p + i];
        f.derivs[i][j][x] = fwd[j].dpsi[x * p + i];
      }
  return f;
}

SeparableFunction antisymmetrized_function(const SeparableFunction& sep) {
  sep.validate();
  if (sep.order > kMaxAntisymmetrizedModes)
    fail(ErrorKind::TooLarge, "antisymmetrized_function: N = " + std::to_string(sep.order) + " exceeds " +
                                  std::to_string(kMaxAntisymmetrizedModes));
  const auto group = all_permutations(sep.order);
  SeparableFunction out = sep;
  out.prefactor = sep.prefactor / static_cast<double>(factorial(sep.order));
  if (sep.perms.empty()) {
    out.perms = group;
    return out;
  }
  // (f o sigma) re-pairs coordinate l with pi(sigma^-1(l)); sigma^-1 runs
  // over the whole group, so compose with every sigma.
  out.perms.clear();
  for (const Permutation& pi : sep.perms) {
    for (const Permutation& sigma : group) {
      Permutation c;
      c.sign = pi.sign * sigma.sign;
      for (int l = 1; l <= sep.order; ++l) c.image.push_back(pi(sigma(l)));
      out.perms.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace antisym
