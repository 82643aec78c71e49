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


#ifndef ANTISYM_TNN_SOLVER_HPP
#define ANTISYM_TNN_SOLVER_HPP

// Tensor neural network ansatz f(r) = sum_i prod_j psi_ij(r_j), one real tanh
// MLP per coordinate emitting (psi_1j .. psi_pj), trained on the 1D
// soft-Coulomb Hamiltonian by Adam with either
//
//   penalized:        <f,Hf>/<f,f> + beta sum_{i<j} <f, f o T_ij>/<f,f>
//   antisymmetrized:  <Af,HAf>/<Af,Af>
//
// Gradients are exact: the losses depend on the networks only through mode
// values and derivatives at the quadrature nodes, so reverse accumulation runs
// over the small contraction graph and then back through each network.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "antisym/quantum1d.hpp"

namespace antisym {

enum class Activation { Tanh, Identity };

struct TnnArch {
  int n_modes = 1;        // N (d = 1)
  int rank = 4;           // p
  int hidden_layers = 2;  // L
  int width = 20;         // m
  Activation activation = Activation::Tanh;

  /// Throws Error(InvalidArgument) unless every count is positive.
  void validate() const;
  std::size_t params_per_mode() const noexcept;
  std::size_t param_count() const noexcept { return params_per_mode() * static_cast<std::size_t>(n_modes); }
};

/// Parameters, flat. Mode j occupies [j*P, (j+1)*P) with P =
/// params_per_mode(); inside, layer l stores its weight matrix as
/// [fan_in x fan_out] row-major followed by its bias. Layers 0..L-1 are
/// hidden (fan_out m), layer L is the linear output (fan_out p).
struct TnnModel {
  TnnArch arch;
  std::vector<double> params;

  void validate() const;
  /// Offset of layer l's weights within mode j's block.
  std::size_t weight_offset(int mode, int layer) const;
  std::size_t bias_offset(int mode, int layer) const;
  int fan_in(int layer) const noexcept;
  int fan_out(int layer) const noexcept;
};

/// Uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases,
/// layer by layer, mode by mode. Deterministic per seed.
TnnModel tnn_init(const TnnArch& arch, std::uint64_t seed);

/// Every parameter zero except the output biases, set to `output_bias`: each
/// psi_ij is that constant. Test hook.
TnnModel tnn_zero_init(const TnnArch& arch, double output_bias = 0.0);

/// psi_ij and d psi_ij / dr at every grid node, by forward evaluation with
/// the tangent carried through each layer.
SeparableFunction tnn_eval_modes(const TnnModel& model, const QuadratureGrid& grid);

/// Attaches the full signed permutation sum with prefactor 1/N!. Existing
/// permutation structure is composed. Throws Error(TooLarge) for N > 6.
SeparableFunction antisymmetrized_function(const SeparableFunction& sep);
inline constexpr int kMaxAntisymmetrizedModes = 6;

enum class LossKind { Penalized, Antisymmetrized };

struct LossValue {
  double loss = 0.0;
  double energy = 0.0;   // Rayleigh quotient of the trained ansatz
  double penalty = 0.0;  // sum_{i<j} <g, g o T_ij>/<g,g>, g the trained ansatz
  double norm = 0.0;     // <g, g>
};

/// Precomputes the pair-interaction matrix and weighted potentials for one
/// (system, grid) and evaluates losses and gradients against it.
class LossEngine {
 public:
  LossEngine(System1D system, QuadratureGrid grid);

  /// Loss of the chosen kind; fills *grad (resized to param_count) when
  /// non-null. Throws Error(Degenerate) on a vanishing norm and
  /// Error(NumericFailure) naming the parameter index on a non-finite
  /// gradient entry.
  LossValue evaluate(LossKind kind, const TnnModel& model, double beta, std::vector<double>* grad = nullptr) const;

  /// <f,f> and <Af,Af> for the model.
  std::pair<double, double> norms(const TnnModel& model) const;

  const System1D& system() const noexcept { return system_; }
  const QuadratureGrid& grid() const noexcept { return grid_; }

 private:
  System1D system_;
  QuadratureGrid grid_;
  std::vector<double> pair_;    // n x n soft-Coulomb matrix
  std::vector<double> wv_;      // w_x v(x)
};

LossValue loss_penalized(const TnnModel& model, const System1D& system, const QuadratureGrid& grid, double beta);
/// penalty reports the normalized swap sum of Af, which is -binom(N,2).
LossValue loss_antisymmetrized(const TnnModel& model, const System1D& system, const QuadratureGrid& grid);

// ---------------------------------------------------------------------------
// Training

enum class Schedule { ExpDecay, InverseTime };

struct TrainConfig {
  int iterations = 5000;
  double lr0 = 1e-3;
  Schedule schedule = Schedule::ExpDecay;
  double decay_rate = 0.7;
  int decay_step = 3000;
  double alpha = 1e-3;  // inverse-time rate
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double beta = 200.0;  // swap penalty weight
  std::uint64_t seed = 0;
  LossKind loss = LossKind::Penalized;
  int eval_stride = 50;

  void validate() const;
};

/// rate^floor(k/step) * lr0, or lr0 / (1 + alpha k).
double lr_at(int k, const TrainConfig& config);

std::vector<double> gradient(LossKind kind, const TnnModel& model, const System1D& system,
                             const QuadratureGrid& grid, const TrainConfig& config);

class Adam {
 public:
  Adam(std::size_t n, double beta1, double beta2, double epsilon);
  /// One bias-corrected step in place.
  void step(std::vector<double>& params, const std::vector<double>& grad, double lr);

 private:
  double beta1_, beta2_, eps_;
  std::vector<double> m_, v_;
  std::int64_t t_ = 0;
};

struct TraceRow {
  int iter = 0;
  double loss = 0.0;
  double energy = 0.0;
  double penalty = 0.0;
  double lr = 0.0;
  double seconds = 0.0;  // wall time since the start of training
};

struct TrainTrace {
  std::vector<TraceRow> rows;
  TnnModel final_model;
  std::uint64_t init_seed = 0;  // seed actually used after any re-draws
  int reinit_draws = 0;
  bool diverged = false;
  std::string message;
};

inline constexpr double kDivergenceThreshold = 1e8;
inline constexpr int kMaxReinitDraws = 5;

/// Draws the initial model from config.seed. For the antisymmetrized loss a
/// draw with ||Af|| < 1e-10 ||f|| is replaced (seed + 1, seed + 2, ...) up to
/// kMaxReinitDraws times.
TnnModel initial_model(const TnnArch& arch, const LossEngine& engine, const TrainConfig& config,
                       std::uint64_t* used_seed = nullptr, int* draws = nullptr);

/// Logs iterations 0, eval_stride, 2*eval_stride, ... and the final one.
/// Stops early with diverged = true when |loss| > 1e8 or becomes non-finite.
TrainTrace train(const TnnArch& arch, const System1D& system, const QuadratureGrid& grid,
                 const TrainConfig& config);
TrainTrace train_from(TnnModel model, const LossEngine& engine, const TrainConfig& config);

// ---------------------------------------------------------------------------
// Files
//
// Settings are flat key=value lines ('#' comments). Training keys match the
// TrainConfig field names (schedule: exp_decay | inverse_time, loss:
// penalized | antisymmetrized); architecture keys are rank, hidden_layers,
// width and activation (tanh | identity).

struct TrainSettings {
  TnnArch arch;  // n_modes comes from the system file
  TrainConfig config;
};

TrainSettings read_train_settings(std::istream& in);
void write_train_settings(std::ostream& out, const TrainSettings& settings);

const char* to_string(Schedule s) noexcept;
const char* to_string(LossKind k) noexcept;
const char* to_string(Activation a) noexcept;
std::optional<Schedule> parse_schedule(const std::string& s);
std::optional<LossKind> parse_loss(const std::string& s);
std::optional<Activation> parse_activation(const std::string& s);

/// Header iter,loss,energy,penalty,lr,seconds. Without `timing` the seconds
/// column is written as 0 so that identical runs give identical files.
void write_trace_csv(std::ostream& out, const TrainTrace& trace, bool timing = false);

}  // namespace antisym

#endif  // ANTISYM_TNN_SOLVER_HPP
