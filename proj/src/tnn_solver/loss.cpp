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
#include <map>

#include "antisym/error.hpp"
#include "antisym/kernels.hpp"
#include "antisym/tnn_solver.hpp"
#include "network.hpp"

namespace antisym {

namespace {

// Expanded term: coefficient and per-coordinate function index i*N + mode.
struct Term {
  double coef;
  std::vector<int> fn;
};

std::vector<Term> plain_terms(int p, int n) {
  std::vector<Term> out;
  for (int i = 0; i < p; ++i) {
    Term t{1.0, std::vector<int>(static_cast<std::size_t>(n))};
    for (int l = 0; l < n; ++l) t.fn[static_cast<std::size_t>(l)] = i * n + l;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Term> antisymmetric_terms(int p, int n) {
  std::vector<Term> out;
  const double inv = 1.0 / static_cast<double>(factorial(n));
  for (const Permutation& pi : all_permutations(n)) {
    for (int i = 0; i < p; ++i) {
      Term t{inv * pi.sign, std::vector<int>(static_cast<std::size_t>(n))};
      for (int l = 0; l < n; ++l) t.fn[static_cast<std::size_t>(l)] = i * n + pi(l + 1) - 1;
      out.push_back(std::move(t));
    }
  }
  return out;
}

using Mat = std::vector<double>;  // A x A row-major

struct Scalars {
  double norm = 0, kin = 0, one = 0, two = 0, swap = 0;
};

// Reverse-mode evaluation of the quadratic forms of f = sum_s c_s prod_l
// F_{s_l}(r_l) for A real functions sampled (with derivatives) on n nodes.
class Contraction {
 public:
  Contraction(const std::vector<Term>& terms, int order, std::size_t a_count, std::size_t n, bool need_two)
      : terms_(terms), order_(order), a_(a_count), n_(n), need_two_(need_two && order >= 2) {
    if (!need_two_) return;
    pair_.assign(a_ * a_, -1);
    for (const Term& s : terms_)
      for (const Term& t : terms_)
        for (int l = 0; l < order_; ++l) {
          auto x = static_cast<std::size_t>(s.fn[static_cast<std::size_t>(l)]);
          auto y = static_cast<std::size_t>(t.fn[static_cast<std::size_t>(l)]);
          if (x > y) std::swap(x, y);
          if (pair_[x * a_ + y] < 0) {
            pair_[x * a_ + y] = pair_[y * a_ + x] = static_cast<int>(pairs_.size());
            pairs_.emplace_back(x, y);
          }
        }
  }

  // F, D: A x n row-major. w: weights, wv: weights * one-body potential.
  Scalars forward(const Mat& f, const Mat& d, const std::vector<double>& w, const std::vector<double>& wv,
                  const std::vector<double>& pair_matrix) {
    const auto& k = kernels::active();
    f_ = &f;
    d_ = &d;
    w_ = &w;
    wv_ = &wv;
    s_ = gram(f, w);
    kk_ = gram(d, w);
    v_ = gram(f, wv);
    if (need_two_) {
      const std::size_t mp = pairs_.size();
      u_.assign(n_ * mp, 0.0);
      for (std::size_t q = 0; q < mp; ++q) {
        const double* fa = f.data() + pairs_[q].first * n_;
        const double* fb = f.data() + pairs_[q].second * n_;
        for (std::size_t x = 0; x < n_; ++x) u_[x * mp + q] = w[x] * fa[x] * fb[x];
      }
      q_.assign(n_ * mp, 0.0);
      k.gemm_nn(n_, mp, n_, pair_matrix.data(), n_, u_.data(), mp, q_.data(), mp);
      t_.assign(mp * mp, 0.0);
      k.gemm_tn(mp, mp, n_, u_.data(), mp, q_.data(), mp, t_.data(), mp);
    }
    Scalars out;
    sweep(&out, nullptr);
    return out;
  }

  // Given upstream adjoints of the scalars, accumulates adjoints of F and D.
  void backward(const Scalars& up, Mat& f_bar, Mat& d_bar) {
    const auto& k = kernels::active();
    sb_.assign(a_ * a_, 0.0);
    kb_.assign(a_ * a_, 0.0);
    vb_.assign(a_ * a_, 0.0);
    tb_.assign(pairs_.size() * pairs_.size(), 0.0);
    sweep(nullptr, &up);
    const Mat& f = *f_;
    const Mat& d = *d_;
    f_bar.assign(a_ * n_, 0.0);
    d_bar.assign(a_ * n_, 0.0);
    for (std::size_t a = 0; a < a_; ++a) {
      double* fb = f_bar.data() + a * n_;
      double* db = d_bar.data() + a * n_;
      for (std::size_t b = 0; b < a_; ++b) {
        const double cs = sb_[a * a_ + b] + sb_[b * a_ + a];
        const double ck = kb_[a * a_ + b] + kb_[b * a_ + a];
        const double cv = vb_[a * a_ + b] + vb_[b * a_ + a];
        const double* fv = f.data() + b * n_;
        const double* dv = d.data() + b * n_;
        if (cs != 0.0 || cv != 0.0)
          for (std::size_t x = 0; x < n_; ++x) fb[x] += (cs * (*w_)[x] + cv * (*wv_)[x]) * fv[x];
        if (ck != 0.0)
          for (std::size_t x = 0; x < n_; ++x) db[x] += ck * (*w_)[x] * dv[x];
      }
    }
    if (need_two_) {
      const std::size_t mp = pairs_.size();
      std::vector<double> tsym(mp * mp);
      for (std::size_t p = 0; p < mp; ++p)
        for (std::size_t q = 0; q < mp; ++q) tsym[p * mp + q] = tb_[p * mp + q] + tb_[q * mp + p];
      std::vector<double> ubar(n_ * mp, 0.0);
      k.gemm_nn(n_, mp, mp, q_.data(), mp, tsym.data(), mp, ubar.data(), mp);
      for (std::size_t q = 0; q < mp; ++q) {
        const auto [a, b] = pairs_[q];
        const double* fa = f.data() + a * n_;
        const double* fbv = f.data() + b * n_;
        double* ga = f_bar.data() + a * n_;
        double* gb = f_bar.data() + b * n_;
        for (std::size_t x = 0; x < n_; ++x) {
          const double g = ubar[x * mp + q] * (*w_)[x];
          ga[x] += g * fbv[x];
          gb[x] += g * fa[x];
        }
      }
    }
  }

 private:
  Mat gram(const Mat& f, const std::vector<double>& w) const {
    const auto& k = kernels::active();
    Mat g(a_ * a_);
    for (std::size_t a = 0; a < a_; ++a)
      for (std::size_t b = a; b < a_; ++b)
        g[a * a_ + b] = g[b * a_ + a] = k.wdot(w.data(), f.data() + a * n_, f.data() + b * n_, n_);
    return g;
  }

  // One pass over term pairs: value mode (out) or adjoint mode (up).
  void sweep(Scalars* out, const Scalars* up) {
    const auto n = static_cast<std::size_t>(order_);
    std::vector<std::size_t> idx(n), sw(n);
    std::vector<double> sv(n), kv(n), vv(n);
    std::vector<char> skip(n);
    // Product of sv over coordinates not flagged in skip.
    auto prod = [&](const std::vector<double>& vals) {
      double r = 1.0;
      for (std::size_t o = 0; o < n; ++o)
        if (!skip[o]) r *= vals[o];
      return r;
    };
    std::vector<double> swv(n);
    for (const Term& s : terms_) {
      for (const Term& t : terms_) {
        const double cc = s.coef * t.coef;
        for (std::size_t l = 0; l < n; ++l) {
          const auto a = static_cast<std::size_t>(s.fn[l]), b = static_cast<std::size_t>(t.fn[l]);
          idx[l] = a * a_ + b;
          sv[l] = s_[idx[l]];
          kv[l] = kk_[idx[l]];
          vv[l] = v_[idx[l]];
        }
        std::fill(skip.begin(), skip.end(), 0);
        if (out) {
          out->norm += cc * prod(sv);
          for (std::size_t l = 0; l < n; ++l) {
            skip[l] = 1;
            const double rest = prod(sv);
            out->kin += 0.5 * cc * kv[l] * rest;
            out->one += cc * vv[l] * rest;
            skip[l] = 0;
          }
        } else {
          for (std::size_t l = 0; l < n; ++l) {
            skip[l] = 1;
            const double rest = prod(sv);
            sb_[idx[l]] += up->norm * cc * rest;
            kb_[idx[l]] += up->kin * 0.5 * cc * rest;
            vb_[idx[l]] += up->one * cc * rest;
            for (std::size_t o = 0; o < n; ++o) {
              if (o == l) continue;
              skip[o] = 1;
              sb_[idx[o]] += cc * prod(sv) * (up->kin * 0.5 * kv[l] + up->one * vv[l]);
              skip[o] = 0;
            }
            skip[l] = 0;
          }
        }
        if (need_two_) two_body(s, t, cc, sv, idx, skip, prod, out, up);
        if (out || up->swap != 0.0) {
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
              for (std::size_t l = 0; l < n; ++l) sw[l] = static_cast<std::size_t>(t.fn[l]);
              std::swap(sw[i], sw[j]);
              for (std::size_t l = 0; l < n; ++l) swv[l] = s_[static_cast<std::size_t>(s.fn[l]) * a_ + sw[l]];
              if (out) {
                out->swap += cc * prod(swv);
              } else {
                for (std::size_t l = 0; l < n; ++l) {
                  skip[l] = 1;
                  sb_[static_cast<std::size_t>(s.fn[l]) * a_ + sw[l]] += up->swap * cc * prod(swv);
                  skip[l] = 0;
                }
              }
            }
          }
        }
      }
    }
  }

  template <class Prod>
  void two_body(const Term& s, const Term& t, double cc, const std::vector<double>& sv,
                const std::vector<std::size_t>& idx, std::vector<char>& skip, Prod& prod, Scalars* out,
                const Scalars* up) {
    const auto n = static_cast<std::size_t>(order_);
    const std::size_t mp = pairs_.size();
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t m = l + 1; m < n; ++m) {
        const auto p = static_cast<std::size_t>(pair_[static_cast<std::size_t>(s.fn[l]) * a_ + static_cast<std::size_t>(t.fn[l])]);
        const auto q = static_cast<std::size_t>(pair_[static_cast<std::size_t>(s.fn[m]) * a_ + static_cast<std::size_t>(t.fn[m])]);
        const double tv = t_[p * mp + q];
        skip[l] = skip[m] = 1;
        const double rest = prod(sv);
        if (out) {
          out->two += cc * tv * rest;
        } else {
          tb_[p * mp + q] += up->two * cc * rest;
          for (std::size_t o = 0; o < n; ++o) {
            if (skip[o]) continue;
            skip[o] = 1;
            sb_[idx[o]] += up->two * cc * tv * prod(sv);
            skip[o] = 0;
          }
        }
        skip[l] = skip[m] = 0;
      }
    }
  }

  std::vector<Term> terms_;
  int order_;
  std::size_t a_, n_;
  bool need_two_;
  std::vector<int> pair_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  const Mat* f_ = nullptr;
  const Mat* d_ = nullptr;
  const std::vector<double>* w_ = nullptr;
  const std::vector<double>* wv_ = nullptr;
  Mat s_, kk_, v_, u_, q_, t_;
  Mat sb_, kb_, vb_, tb_;
};

// Function-major layout: F[(i*N + j) * n + x] = psi_ij(x_x).
void gather(const std::vector<detail::ModeForward>& fwd, int p, int n_modes, std::size_t n, Mat& f, Mat& d) {
  const auto pp = static_cast<std::size_t>(p), nm = static_cast<std::size_t>(n_modes);
  f.assign(pp * nm * n, 0.0);
  d.assign(f.size(), 0.0);
  for (std::size_t j = 0; j < nm; ++j)
    for (std::size_t i = 0; i < pp; ++i) {
      double* fr = f.data() + (i * nm + j) * n;
      double* dr = d.data() + (i * nm + j) * n;
      for (std::size_t x = 0; x < n; ++x) {
        fr[x] = fwd[j].psi[x * pp + i];
        dr[x] = fwd[j].dpsi[x * pp + i];
      }
    }
}

}  // namespace

LossEngine::LossEngine(System1D system, QuadratureGrid grid) : system_(std::move(system)), grid_(std::move(grid)) {
  system_.validate();
  if (grid_.size() == 0 || grid_.weights.size() != grid_.size())
    fail(ErrorKind::InvalidArgument, "LossEngine: empty or inconsistent grid");
  pair_ = pair_interaction_matrix(grid_);
  wv_.resize(grid_.size());
  for (std::size_t x = 0; x < grid_.size(); ++x) wv_[x] = grid_.weights[x] * one_body_potential(system_, grid_.nodes[x]);
}

LossValue LossEngine::evaluate(LossKind kind, const TnnModel& model, double beta, std::vector<double>* grad) const {
  model.validate();
  const TnnArch& a = model.arch;
  if (a.n_modes != system_.n_electrons)
    fail(ErrorKind::DimensionMismatch, "model has " + std::to_string(a.n_modes) + " modes but the system has " +
                                           std::to_string(system_.n_electrons) + " electrons");
  if (!(beta >= 0.0)) fail(ErrorKind::InvalidArgument, "penalty beta must be >= 0");
  if (kind == LossKind::Antisymmetrized && a.n_modes > kMaxAntisymmetrizedModes)
    fail(ErrorKind::TooLarge, "antisymmetrized loss limited to N <= 6");
  const std::size_t n = grid_.size();
  const auto fwd = detail::forward(model, grid_.nodes);
  Mat f, d;
  gather(fwd, a.rank, a.n_modes, n, f, d);
  const auto terms = kind == LossKind::Penalized ? plain_terms(a.rank, a.n_modes) : antisymmetric_terms(a.rank, a.n_modes);
  Contraction c(terms, a.n_modes, static_cast<std::size_t>(a.rank * a.n_modes), n, true);
  const Scalars s = c.forward(f, d, grid_.weights, wv_, pair_);
  if (!std::isfinite(s.norm) || s.norm < kDegenerateNorm)
    fail(ErrorKind::Degenerate, std::string(kind == LossKind::Antisymmetrized
                                                ? "antisymmetrized ansatz vanishes (symmetric network output); re-initialize with another seed"
                                                : "TNN ansatz has vanishing norm") +
                                    " (<f,f> = " + std::to_string(s.norm) + ")");
  const double h = s.kin + s.one + s.two;
  LossValue out;
  out.norm = s.norm;
  out.energy = h / s.norm;
  out.penalty = s.swap / s.norm;
  const double wpen = kind == LossKind::Penalized ? beta : 0.0;
  out.loss = out.energy + wpen * out.penalty;
  if (!grad) return out;

  Scalars up;
  up.kin = up.one = up.two = 1.0 / s.norm;
  up.swap = wpen / s.norm;
  up.norm = -(h + wpen * s.swap) / (s.norm * s.norm);
  Mat f_bar, d_bar;
  c.backward(up, f_bar, d_bar);
  grad->assign(a.param_count(), 0.0);
  const auto p = static_cast<std::size_t>(a.rank), nm = static_cast<std::size_t>(a.n_modes);
  std::vector<double> psi_bar(n * p), dpsi_bar(n * p);
  for (std::size_t j = 0; j < nm; ++j) {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t x = 0; x < n; ++x) {
        psi_bar[x * p + i] = f_bar[(i * nm + j) * n + x];
        dpsi_bar[x * p + i] = d_bar[(i * nm + j) * n + x];
      }
    detail::backward(model, grid_.nodes, static_cast<int>(j), fwd[j], psi_bar, dpsi_bar, grad->data());
  }
  for (std::size_t i = 0; i < grad->size(); ++i)
    if (!std::isfinite((*grad)[i]))
      fail(ErrorKind::NumericFailure, "gradient entry " + std::to_string(i) + " (mode " +
                                          std::to_string(i / a.params_per_mode() + 1) + ") is not finite");
  return out;
}

std::pair<double, double> LossEngine::norms(const TnnModel& model) const {
  model.validate();
  const TnnArch& a = model.arch;
  const auto fwd = detail::forward(model, grid_.nodes);
  Mat f, d;
  gather(fwd, a.rank, a.n_modes, grid_.size(), f, d);
  const auto count = static_cast<std::size_t>(a.rank * a.n_modes);
  Contraction plain(plain_terms(a.rank, a.n_modes), a.n_modes, count, grid_.size(), false);
  Contraction anti(antisymmetric_terms(a.rank, a.n_modes), a.n_modes, count, grid_.size(), false);
  return {plain.forward(f, d, grid_.weights, wv_, pair_).norm, anti.forward(f, d, grid_.weights, wv_, pair_).norm};
}

LossValue loss_penalized(const TnnModel& model, const System1D& system, const QuadratureGrid& grid, double beta) {
  return LossEngine(system, grid).evaluate(LossKind::Penalized, model, beta);
}

LossValue loss_antisymmetrized(const TnnModel& model, const System1D& system, const QuadratureGrid& grid) {
  return LossEngine(system, grid).evaluate(LossKind::Antisymmetrized, model, 0.0);
}

std::vector<double> gradient(LossKind kind, const TnnModel& model, const System1D& system,
                             const QuadratureGrid& grid, const TrainConfig& config) {
  std::vector<double> g;
  LossEngine(system, grid).evaluate(kind, model, config.beta, &g);
  return g;
}

}  // namespace antisym
