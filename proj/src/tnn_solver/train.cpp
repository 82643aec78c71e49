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


#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "antisym/error.hpp"
#include "antisym/tnn_solver.hpp"

namespace antisym {

void TrainConfig::validate() const {
  if (iterations < 0) fail(ErrorKind::InvalidArgument, "iterations must be >= 0");
  if (!(lr0 > 0.0)) fail(ErrorKind::InvalidArgument, "lr0 must be positive");
  if (!(decay_rate > 0.0) || decay_step < 1) fail(ErrorKind::InvalidArgument, "exp_decay needs rate > 0 and step >= 1");
  if (!(alpha >= 0.0)) fail(ErrorKind::InvalidArgument, "inverse_time alpha must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_epsilon > 0.0))
    fail(ErrorKind::InvalidArgument, "Adam needs betas in [0,1) and epsilon > 0");
  if (!(beta >= 0.0)) fail(ErrorKind::InvalidArgument, "penalty beta must be >= 0");
  if (eval_stride < 1) fail(ErrorKind::InvalidArgument, "eval_stride must be >= 1");
}

double lr_at(int k, const TrainConfig& config) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "lr_at: k must be >= 0");
  if (config.schedule == Schedule::InverseTime) return config.lr0 / (1.0 + config.alpha * k);
  return std::pow(config.decay_rate, k / config.decay_step) * config.lr0;
}

Adam::Adam(std::size_t n, double beta1, double beta2, double epsilon)
    : beta1_(beta1), beta2_(beta2), eps_(epsilon), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    fail(ErrorKind::DimensionMismatch, "Adam: parameter count changed");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

TnnModel initial_model(const TnnArch& arch, const LossEngine& engine, const TrainConfig& config,
                       std::uint64_t* used_seed, int* draws) {
  std::uint64_t seed = config.seed;
  TnnModel model = tnn_init(arch, seed);
  int redraws = 0;
  if (config.loss == LossKind::Antisymmetrized) {
    while (redraws < kMaxReinitDraws) {
      const auto [plain, anti] = engine.norms(model);
      if (anti >= 1e-20 * plain) break;  // ||Af|| >= 1e-10 ||f||
      ++redraws;
      model = tnn_init(arch, ++seed);
    }
  }
  if (used_seed) *used_seed = seed;
  if (draws) *draws = redraws;
  return model;
}

TrainTrace train_from(TnnModel model, const LossEngine& engine, const TrainConfig& config) {
  config.validate();
  model.validate();
  TrainTrace trace;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  Adam adam(model.params.size(), config.adam_beta1, config.adam_beta2, config.adam_epsilon);
  std::vector<double> grad;
  for (int k = 0; k <= config.iterations; ++k) {
    const bool last = k == config.iterations;
    LossValue v;
    try {
      v = engine.evaluate(config.loss, model, config.beta, last ? nullptr : &grad);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NumericFailure && e.kind() != ErrorKind::Degenerate) throw;
      trace.diverged = true;
      trace.message = "iteration " + std::to_string(k) + ": " + e.what();
      break;
    }
    const double lr = lr_at(k, config);
    if (!std::isfinite(v.loss) || std::abs(v.loss) > kDivergenceThreshold) {
      trace.rows.push_back({k, v.loss, v.energy, v.penalty, lr, elapsed()});
      trace.diverged = true;
      trace.message = "iteration " + std::to_string(k) + ": |loss| exceeded 1e8";
      break;
    }
    if (k % config.eval_stride == 0 || last) trace.rows.push_back({k, v.loss, v.energy, v.penalty, lr, elapsed()});
    if (!last) adam.step(model.params, grad, lr);
  }
  trace.final_model = std::move(model);
  return trace;
}

TrainTrace train(const TnnArch& arch, const System1D& system, const QuadratureGrid& grid, const TrainConfig& config) {
  config.validate();
  TnnArch a = arch;
  a.n_modes = system.n_electrons;
  const LossEngine engine(system, grid);
  std::uint64_t seed = 0;
  int draws = 0;
  TnnModel model = initial_model(a, engine, config, &seed, &draws);
  TrainTrace trace = train_from(std::move(model), engine, config);
  trace.init_seed = seed;
  trace.reinit_draws = draws;
  return trace;
}

// ---------------------------------------------------------------------------

const char* to_string(Schedule s) noexcept { return s == Schedule::InverseTime ? "inverse_time" : "exp_decay"; }
const char* to_string(LossKind k) noexcept { return k == LossKind::Antisymmetrized ? "antisymmetrized" : "penalized"; }
const char* to_string(Activation a) noexcept { return a == Activation::Identity ? "identity" : "tanh"; }

std::optional<Schedule> parse_schedule(const std::string& s) {
  if (s == "exp_decay") return Schedule::ExpDecay;
  if (s == "inverse_time") return Schedule::InverseTime;
  return std::nullopt;
}

std::optional<LossKind> parse_loss(const std::string& s) {
  if (s == "penalized") return LossKind::Penalized;
  if (s == "antisymmetrized") return LossKind::Antisymmetrized;
  return std::nullopt;
}

std::optional<Activation> parse_activation(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "identity") return Activation::Identity;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value, int lineno) {
  std::istringstream in(value);
  T out{};
  std::string extra;
  if (!(in >> out) || (in >> extra))
    fail(ErrorKind::Parse, "settings line " + std::to_string(lineno) + ": bad value for '" + key + "'");
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TrainSettings read_train_settings(std::istream& in) {
  TrainSettings s;
  TrainConfig& c = s.config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Parse, "settings line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    auto bad = [&] { fail(ErrorKind::Parse, "settings line " + std::to_string(lineno) + ": bad value for '" + key + "'"); };
    if (key == "iterations") c.iterations = parse_number<int>(key, value, lineno);
    else if (key == "lr0") c.lr0 = parse_number<double>(key, value, lineno);
    else if (key == "schedule") { auto v = parse_schedule(value); if (!v) bad(); c.schedule = *v; }
    else if (key == "decay_rate") c.decay_rate = parse_number<double>(key, value, lineno);
    else if (key == "decay_step") c.decay_step = parse_number<int>(key, value, lineno);
    else if (key == "alpha") c.alpha = parse_number<double>(key, value, lineno);
    else if (key == "adam_beta1") c.adam_beta1 = parse_number<double>(key, value, lineno);
    else if (key == "adam_beta2") c.adam_beta2 = parse_number<double>(key, value, lineno);
    else if (key == "adam_epsilon") c.adam_epsilon = parse_number<double>(key, value, lineno);
    else if (key == "beta") c.beta = parse_number<double>(key, value, lineno);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value, lineno);
    else if (key == "loss") { auto v = parse_loss(value); if (!v) bad(); c.loss = *v; }
    else if (key == "eval_stride") c.eval_stride = parse_number<int>(key, value, lineno);
    else if (key == "rank") s.arch.rank = parse_number<int>(key, value, lineno);
    else if (key == "hidden_layers") s.arch.hidden_layers = parse_number<int>(key, value, lineno);
    else if (key == "width") s.arch.width = parse_number<int>(key, value, lineno);
    else if (key == "activation") { auto v = parse_activation(value); if (!v) bad(); s.arch.activation = *v; }
    else fail(ErrorKind::Parse, "settings line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  try {
    c.validate();
    TnnArch probe = s.arch;
    probe.n_modes = 1;
    probe.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Parse, std::string("settings: ") + e.what());
  }
  return s;
}

void write_train_settings(std::ostream& out, const TrainSettings& s) {
  const TrainConfig& c = s.config;
  out << "iterations=" << c.iterations << '\n'
      << "lr0=" << fmt(c.lr0) << '\n'
      << "schedule=" << to_string(c.schedule) << '\n'
      << "decay_rate=" << fmt(c.decay_rate) << '\n'
      << "decay_step=" << c.decay_step << '\n'
      << "alpha=" << fmt(c.alpha) << '\n'
      << "adam_beta1=" << fmt(c.adam_beta1) << '\n'
      << "adam_beta2=" << fmt(c.adam_beta2) << '\n'
      << "adam_epsilon=" << fmt(c.adam_epsilon) << '\n'
      << "beta=" << fmt(c.beta) << '\n'
      << "seed=" << c.seed << '\n'
      << "loss=" << to_string(c.loss) << '\n'
      << "eval_stride=" << c.eval_stride << '\n'
      << "rank=" << s.arch.rank << '\n'
      << "hidden_layers=" << s.arch.hidden_layers << '\n'
      << "width=" << s.arch.width << '\n'
      << "activation=" << to_string(s.arch.activation) << '\n';
}

void write_trace_csv(std::ostream& out, const TrainTrace& trace, bool timing) {
  out << "iter,loss,energy,penalty,lr,seconds\n";
  char buf[256];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12e,%.12e,%.12e,%.6e,%.3f\n", r.iter, r.loss, r.energy, r.penalty, r.lr,
                  timing ? r.seconds : 0.0);
    out << buf;
  }
}

}  // namespace antisym
