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


#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "antisym/cp_rank.hpp"
#include "antisym/error.hpp"
#include "antisym/tensor_core.hpp"
#include "antisym/tnn_solver.hpp"
#include "antisym/tpf_bridge.hpp"
#include "svg.hpp"

namespace antisym::cli {

namespace {

namespace fs = std::filesystem;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericFailure:
    case ErrorKind::Diverged:
    case ErrorKind::Degenerate:
    case ErrorKind::Overflow:
      return kExitNumeric;
    default:
      return kExitUsage;
  }
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Usage(std::string("--") + what + ": '" + s + "' is not a comma-separated list of integers");
    }
  }
  if (out.empty()) throw Usage(std::string("--") + what + ": empty list");
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read '" + path + "'");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

std::string default_out_dir() {
  const char* env = std::getenv("ANTISYM_OUT_DIR");
  return env && *env ? env : ".";
}

// ---------------------------------------------------------------------------
// Shared flag groups

struct GridFlags {
  std::vector<double> box{-10.0, 10.0};
  int subintervals = 30;
  int qpoints = 30;

  void attach(CLI::App* app) {
    app->add_option("--box", box, "Truncated interval a b")->expected(2)->capture_default_str();
    app->add_option("--subintervals", subintervals, "Uniform subintervals")->capture_default_str();
    app->add_option("--qpoints", qpoints, "Gauss-Legendre points per subinterval")->capture_default_str();
  }
  QuadratureGrid grid() const {
    if (box.size() != 2 || !(box[0] < box[1])) throw Usage("--box needs a < b");
    if (subintervals < 1 || qpoints < 1) throw Usage("--subintervals and --qpoints must be >= 1");
    return gauss_legendre_grid(box[0], box[1], subintervals, qpoints);
  }
};

struct RunFlags {
  std::string config_path, system_path, out_dir = default_out_dir(), prefix;
  std::optional<int> iterations;
  std::optional<std::uint64_t> seed;
  std::string schedule, loss;
  std::optional<double> alpha;
  bool timing = false;
  GridFlags grid;

  void attach(CLI::App* app, const std::string& default_prefix) {
    prefix = default_prefix;
    app->add_option("--config", config_path, "Training settings (key=value)")->required();
    app->add_option("--system", system_path, "System file (nucleus/electrons lines)")->required();
    app->add_option("--out-dir", out_dir, "Output directory (default $ANTISYM_OUT_DIR or .)");
    app->add_option("--prefix", prefix, "Output file stem")->capture_default_str();
    app->add_option("--iterations", iterations, "Override iterations");
    app->add_option("--schedule", schedule, "Override schedule: exp_decay | inverse_time");
    app->add_option("--alpha", alpha, "Override the inverse-time rate");
    app->add_flag("--timing", timing, "Record wall time (seconds column and a comment line)");
    grid.attach(app);
  }

  TrainSettings settings() const {
    auto in = open_in(config_path);
    TrainSettings s = read_train_settings(in);
    if (iterations) s.config.iterations = *iterations;
    if (seed) s.config.seed = *seed;
    if (alpha) s.config.alpha = *alpha;
    if (!schedule.empty()) {
      auto v = parse_schedule(schedule);
      if (!v) throw Usage("--schedule must be exp_decay or inverse_time");
      s.config.schedule = *v;
    }
    if (!loss.empty()) {
      auto v = parse_loss(loss);
      if (!v) throw Usage("--loss must be penalized or antisymmetrized");
      s.config.loss = *v;
    }
    s.config.validate();
    return s;
  }

  System1D system() const {
    auto in = open_in(system_path);
    return read_system(in);
  }
};

// ---------------------------------------------------------------------------
// bounds

struct BoundsFlags {
  int n = 0;
  std::optional<int> k;
  std::string csv;
};

int cmd_bounds(const BoundsFlags& f, std::ostream& out, std::ostream& err) {
  if (f.n < 1) throw Usage("--n must be >= 1");
  if (f.n > 20) throw Usage("exact bounds are evaluated for N <= 20 (64-bit range)");
  if (f.k && *f.k < 1) throw Usage("--k must be >= 1");
  if (f.k && *f.k < f.n) {
    err << "K = " << *f.k << " < N = " << f.n
        << ": trivial case, the only antisymmetric tensor is zero (dimension 0), so no rank bounds apply\n";
    return kExitUsage;
  }
  const RankBounds det = det_rank_bounds(f.n);
  const AsymptoticBound asym = asymptotic_lower_bound(f.n);
  std::vector<std::pair<std::string, std::string>> rows{
      {"N", std::to_string(f.n)},
      {"det_rank_lower", std::to_string(det.lower)},
      {"det_rank_upper", std::to_string(det.upper)},
      {"asymptotic_2^N/sqrt(N)", fmt("%.6g", asym.asymptotic)},
      {"lower/asymptotic", fmt("%.6f", asym.ratio())},
  };
  if (f.k) {
    const RankBounds ab = antisym_rank_bounds(f.n, *f.k);
    rows.push_back({"K", std::to_string(*f.k)});
    rows.push_back({"antisym_dim", std::to_string(binomial(*f.k, f.n))});
    rows.push_back({"antisym_rank_lower", std::to_string(ab.lower)});
    rows.push_back({"antisym_rank_upper", std::to_string(ab.upper)});
  }
  // Any nonzero antisymmetric TNN, at any fixed depth and width, has TPF
  // rank at least the determinant lower bound.
  rows.push_back({"tnn_rank_lower", std::to_string(det.lower)});
  for (const auto& [key, value] : rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-24s %s\n", key.c_str(), value.c_str());
    out << buf;
  }
  if (!f.csv.empty()) {
    auto csv = open_out(f.csv);
    csv << "quantity,value\n";
    for (const auto& [key, value] : rows) csv << key << ',' << value << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// rank-est

struct RankFlags {
  std::optional<int> det;
  std::string basis;
  std::optional<int> k;
  std::string file;
  int pmax = 0;
  int restarts = 16;
  std::uint64_t seed = 0x5eed;
  int max_sweeps = 2000;
  double tol = 1e-9;
  std::string out_path;
};

DenseTensor rank_source(const RankFlags& f) {
  const int sources = (f.det ? 1 : 0) + (f.basis.empty() ? 0 : 1) + (f.file.empty() ? 0 : 1);
  if (sources != 1) throw Usage("give exactly one of --det, --basis (with --k) or --file");
  if (f.det) {
    if (*f.det < 1 || *f.det > kMaxOrder) throw Usage("--det N needs 1 <= N <= 8");
    return determinant_tensor(*f.det);
  }
  if (!f.basis.empty()) {
    if (!f.k) throw Usage("--basis needs --k");
    return basis_tensor(MultiIndex(parse_int_list(f.basis, "basis"), *f.k), *f.k);
  }
  auto in = open_in(f.file);
  return read_tensor(in);
}

int cmd_rank_est(const RankFlags& f, std::ostream& out, std::ostream&) {
  if (f.pmax < 1) throw Usage("--pmax must be >= 1");
  const DenseTensor x = rank_source(f);
  AlsOptions opts;
  opts.restarts = f.restarts;
  opts.seed = f.seed;
  opts.max_sweeps = f.max_sweeps;
  opts.rel_tol = f.tol;
  opts.validate();
  const RankReport report = rank_search(x, f.pmax, opts);
  if (f.out_path.empty()) {
    write_rank_report(out, report);
  } else {
    auto file = open_out(f.out_path);
    write_rank_report(file, report);
    out << "estimated_rank=" << (report.estimated_rank ? std::to_string(*report.estimated_rank) : "not_found") << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// basis

struct BasisFlags {
  int n = 0;
  int k = 0;
  std::string index;
  std::string out_path;
};

int cmd_basis(const BasisFlags& f, std::ostream& out, std::ostream& err) {
  if (f.n < 1 || f.n > kMaxOrder) throw Usage("--n must be in 1..8");
  if (f.k < 1) throw Usage("--k must be >= 1");
  std::ostringstream body;
  if (f.index.empty()) {
    if (f.k < f.n) err << "K < N: the multi-index set is empty (trivial case)\n";
    body << "position";
    for (int j = 1; j <= f.n; ++j) body << ",k" << j;
    body << '\n';
    int pos = 1;
    for (const MultiIndex& m : enumerate_multi_indices(f.n, f.k)) {
      body << pos++;
      for (int v : m.entries()) body << ',' << v;
      body << '\n';
    }
  } else {
    const MultiIndex m(parse_int_list(f.index, "index"), f.k);
    if (m.order() != f.n) throw Usage("--index must have N entries");
    write_tensor(body, basis_tensor(m, f.k));
  }
  if (f.out_path.empty()) {
    out << body.str();
  } else {
    auto file = open_out(f.out_path);
    file << body.str();
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// roundtrip

struct RoundtripFlags {
  std::string file;
  int n = 3, k = 4, p = 3;
  std::uint64_t seed = 0;
  std::string basis = "monomial";
  int points = 100;
  std::string tensor_out;
};

int cmd_roundtrip(const RoundtripFlags& f, std::ostream& out, std::ostream&) {
  CpDecomposition cp;
  if (!f.file.empty()) {
    auto in = open_in(f.file);
    cp = read_tpf(in);
  } else {
    if (f.n < 1 || f.n > kMaxOrder || f.k < 1 || f.p < 0) throw Usage("need 1 <= N <= 8, K >= 1, p >= 0");
    std::mt19937_64 rng(f.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    cp = CpDecomposition(std::vector<std::size_t>(static_cast<std::size_t>(f.n), static_cast<std::size_t>(f.k)));
    for (int i = 0; i < f.p; ++i) {
      std::vector<ComplexVector> factors;
      for (int j = 0; j < f.n; ++j) {
        ComplexVector v(static_cast<std::size_t>(f.k));
        for (auto& z : v) z = Complex(g(rng), g(rng));
        factors.push_back(std::move(v));
      }
      cp.terms.push_back(std::move(factors));
    }
  }
  if (f.points < 1) throw Usage("--points must be >= 1");
  const int kdim = static_cast<int>(cp.dims.empty() ? 0 : cp.dims.front());
  FunctionBasis basis;
  if (f.basis == "monomial") basis = monomial_basis(kdim);
  else if (f.basis == "indicator") basis = indicator_basis(kdim);
  else throw Usage("--basis must be monomial or indicator");

  const TpfFunction tpf = tensor_to_tpf(cp, basis);
  const DenseTensor x = tpf_to_tensor(tpf);
  const TpfFunction dense(tpf.order(), basis, std::nullopt, x);
  const auto pts = sample_points(basis.domain, tpf.order(), static_cast<std::size_t>(f.points), f.seed + 1);
  const auto via_cp = evaluate_tpf(tpf, pts), via_dense = evaluate_tpf(dense, pts);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    num = std::max(num, std::abs(via_cp[i] - via_dense[i]));
    den = std::max(den, std::abs(via_dense[i]));
  }
  const double back = max_abs_diff(tpf_to_tensor(tensor_to_tpf(cp, basis)), dense_from_cp(cp));
  const double commute = max_abs_diff(tpf_to_tensor(antisymmetrize_tpf(tpf)), antisymmetrize(x));

  out << "quantity,value\n"
      << "order," << tpf.order() << '\n'
      << "basis_size," << kdim << '\n'
      << "tpf_rank," << cp.rank() << '\n'
      << "points," << pts.size() << '\n'
      << "eval_max_rel_err," << fmt("%.3e", den > 0 ? num / den : num) << '\n'
      << "roundtrip_max_abs_err," << fmt("%.3e", back) << '\n'
      << "antisym_commute_max_abs_err," << fmt("%.3e", commute) << '\n';
  if (!f.tensor_out.empty()) {
    auto file = open_out(f.tensor_out);
    write_tensor(file, x);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

Chart trace_chart(const std::string& title, const std::vector<std::pair<std::string, const TrainTrace*>>& runs,
                  bool energy) {
  Chart c{title, "iteration", energy ? "energy" : "loss", {}};
  for (const auto& [name, t] : runs) {
    Series s{name, {}, {}};
    for (const TraceRow& r : t->rows) {
      s.x.push_back(r.iter);
      s.y.push_back(energy ? r.energy : r.loss);
    }
    c.series.push_back(std::move(s));
  }
  return c;
}

int cmd_train(const RunFlags& f, std::ostream& out, std::ostream& err) {
  const TrainSettings s = f.settings();
  const System1D sys = f.system();
  const QuadratureGrid grid = f.grid.grid();
  TnnArch arch = s.arch;
  arch.n_modes = sys.n_electrons;
  const TrainTrace t = train(arch, sys, grid, s.config);

  const fs::path dir(f.out_dir);
  {
    auto csv = open_out(dir / (f.prefix + ".csv"));
    if (f.timing && !t.rows.empty()) csv << "# wall_seconds=" << fmt("%.3f", t.rows.back().seconds) << '\n';
    write_trace_csv(csv, t, f.timing);
  }
  {
    auto svg = open_out(dir / (f.prefix + ".svg"));
    write_svg(svg, trace_chart(std::string(to_string(s.config.loss)) + " loss, N=" + std::to_string(arch.n_modes) +
                                   ", p=" + std::to_string(arch.rank),
                               {{to_string(s.config.loss), &t}}, false));
  }
  if (t.reinit_draws > 0) out << "re-drew the initialization " << t.reinit_draws << " time(s); seed " << t.init_seed << '\n';
  if (!t.rows.empty()) {
    const TraceRow& r = t.rows.back();
    out << "final iter=" << r.iter << " loss=" << fmt("%.10g", r.loss) << " energy=" << fmt("%.10g", r.energy)
        << " penalty=" << fmt("%.6g", r.penalty) << '\n';
  }
  out << "wrote " << (dir / (f.prefix + ".csv")).string() << " and " << (dir / (f.prefix + ".svg")).string() << '\n';
  if (t.diverged) {
    err << "training aborted: " << t.message << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareFlags {
  RunFlags run;
  std::string seeds = "0";
  int jobs = 1;
};

int cmd_compare(const CompareFlags& f, std::ostream& out, std::ostream& err) {
  TrainSettings s = f.run.settings();
  const System1D sys = f.run.system();
  const QuadratureGrid grid = f.run.grid.grid();
  if (f.jobs < 1) throw Usage("--jobs must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (int v : parse_int_list(f.seeds, "seeds")) {
    if (v < 0) throw Usage("--seeds must be non-negative");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  TnnArch arch = s.arch;
  arch.n_modes = sys.n_electrons;
  const LossEngine engine(sys, grid);

  // Shared initialization per seed, drawn under the antisymmetrized rule so
  // both runs start from a model whose antisymmetrization is nondegenerate.
  struct Job {
    std::uint64_t seed;
    LossKind kind;
    TnnModel init;
    TrainTrace trace;
  };
  std::vector<Job> jobs;
  for (std::uint64_t seed : seeds) {
    TrainConfig c = s.config;
    c.seed = seed;
    c.loss = LossKind::Antisymmetrized;
    const TnnModel init = initial_model(arch, engine, c);
    jobs.push_back({seed, LossKind::Penalized, init, {}});
    jobs.push_back({seed, LossKind::Antisymmetrized, init, {}});
  }
  auto run_job = [&](Job& j) {
    TrainConfig c = s.config;
    c.seed = j.seed;
    c.loss = j.kind;
    j.trace = train_from(j.init, engine, c);
  };
  if (f.jobs == 1) {
    for (Job& j : jobs) run_job(j);
  } else {
    std::vector<std::exception_ptr> errors(jobs.size());
    for (std::size_t start = 0; start < jobs.size(); start += static_cast<std::size_t>(f.jobs)) {
      std::vector<std::thread> pool;
      for (std::size_t i = start; i < std::min(jobs.size(), start + static_cast<std::size_t>(f.jobs)); ++i)
        pool.emplace_back([&, i] {
          try {
            run_job(jobs[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const fs::path dir(f.run.out_dir);
  bool diverged = false;
  int lower = 0;
  {
    auto csv = open_out(dir / (f.run.prefix + ".csv"));
    out << "schedule=" << to_string(s.config.schedule);
    if (s.config.schedule == Schedule::InverseTime) out << " alpha=" << fmt("%g", s.config.alpha);
    out << " iterations=" << s.config.iterations << " beta=" << fmt("%g", s.config.beta) << '\n';
    if (f.run.timing)
      for (std::size_t i = 0; i < jobs.size(); i += 2)
        csv << "# seed=" << jobs[i].seed << " penalized_seconds="
            << fmt("%.3f", jobs[i].trace.rows.empty() ? 0.0 : jobs[i].trace.rows.back().seconds)
            << " antisymmetrized_seconds="
            << fmt("%.3f", jobs[i + 1].trace.rows.empty() ? 0.0 : jobs[i + 1].trace.rows.back().seconds) << '\n';
    csv << "seed,iter,lr,penalized_loss,penalized_energy,penalized_penalty,antisymmetrized_loss,"
           "antisymmetrized_energy,antisymmetrized_penalty\n";
    for (std::size_t i = 0; i < jobs.size(); i += 2) {
      const TrainTrace& p = jobs[i].trace;
      const TrainTrace& a = jobs[i + 1].trace;
      const std::size_t rows = std::min(p.rows.size(), a.rows.size());
      for (std::size_t r = 0; r < rows; ++r) {
        char buf[320];
        std::snprintf(buf, sizeof buf, "%llu,%d,%.6e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n",
                      static_cast<unsigned long long>(jobs[i].seed), p.rows[r].iter, p.rows[r].lr, p.rows[r].loss,
                      p.rows[r].energy, p.rows[r].penalty, a.rows[r].loss, a.rows[r].energy, a.rows[r].penalty);
        csv << buf;
      }
      auto svg = open_out(dir / (f.run.prefix + "_seed" + std::to_string(jobs[i].seed) + ".svg"));
      write_svg(svg, trace_chart("energy, seed " + std::to_string(jobs[i].seed) + ", " + to_string(s.config.schedule),
                                 {{"penalized", &p}, {"antisymmetrized", &a}}, true));
      if (p.diverged || a.diverged) {
        diverged = true;
        err << "seed " << jobs[i].seed << ": " << (p.diverged ? p.message : a.message) << '\n';
        continue;
      }
      const double ep = p.rows.back().energy, ea = a.rows.back().energy;
      const bool is_lower = ea < ep;
      lower += is_lower;
      out << "seed " << jobs[i].seed << ": penalized energy " << fmt("%.8f", ep) << ", antisymmetrized energy "
          << fmt("%.8f", ea) << ", antisymmetrized lower: " << (is_lower ? "yes" : "no") << '\n';
    }
  }
  out << "antisymmetrized lower on " << lower << "/" << seeds.size() << " seeds\n";
  out << "wrote " << (dir / (f.run.prefix + ".csv")).string() << '\n';
  return diverged ? kExitNumeric : kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportFlags {
  std::vector<std::string> inputs;
  std::string svg;
  std::string column = "energy";
};

struct TraceFile {
  std::vector<double> iter, value, energy, loss;
};

TraceFile read_trace(const std::string& path, const std::string& column) {
  auto in = open_in(path);
  std::string line;
  std::vector<std::string> header;
  TraceFile t;
  int lineno = 0;
  std::map<std::string, std::size_t> col;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (col.empty()) {
      for (std::size_t i = 0; i < cells.size(); ++i) col[cells[i]] = i;
      for (const char* need : {"iter", "loss", "energy"})
        if (!col.count(need)) fail(ErrorKind::Parse, path + ": not a trace CSV (missing '" + need + "')");
      if (!col.count(column)) fail(ErrorKind::Parse, path + ": no column '" + column + "'");
      continue;
    }
    if (cells.size() != col.size()) fail(ErrorKind::Parse, path + " line " + std::to_string(lineno) + ": wrong cell count");
    try {
      t.iter.push_back(std::stod(cells[col["iter"]]));
      t.loss.push_back(std::stod(cells[col["loss"]]));
      t.energy.push_back(std::stod(cells[col["energy"]]));
      t.value.push_back(std::stod(cells[col[column]]));
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, path + " line " + std::to_string(lineno) + ": bad number");
    }
  }
  if (col.empty()) fail(ErrorKind::Parse, path + ": empty file");
  return t;
}

int cmd_report(const ReportFlags& f, std::ostream& out, std::ostream&) {
  if (f.inputs.empty()) throw Usage("report needs at least one trace CSV");
  if (!f.svg.empty() && f.inputs.size() > 2) throw Usage("--svg charts at most two traces");
  Chart chart{"trace comparison", "iteration", f.column, {}};
  out << "file,rows,final_iter,final_loss,final_energy,min_energy\n";
  for (const std::string& path : f.inputs) {
    const TraceFile t = read_trace(path, f.column);
    if (t.iter.empty()) {
      out << path << ",0,,,,\n";
      continue;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, ",%zu,%.0f,%.12e,%.12e,%.12e\n", t.iter.size(), t.iter.back(), t.loss.back(),
                  t.energy.back(), *std::min_element(t.energy.begin(), t.energy.end()));
    out << path << buf;
    chart.series.push_back({fs::path(path).stem().string(), t.iter, t.value});
  }
  if (!f.svg.empty()) {
    auto svg = open_out(f.svg);
    write_svg(svg, chart);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Antisymmetric tensors, CP-rank bounds, TPF bridge and TNN solver experiments", "antisym"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  BoundsFlags bounds;
  auto* c_bounds = app.add_subcommand("bounds", "CP-rank bounds for determinant and antisymmetric tensors");
  c_bounds->add_option("--n", bounds.n, "Order N")->required();
  c_bounds->add_option("--k", bounds.k, "Mode dimension K");
  c_bounds->add_option("--csv", bounds.csv, "Also write quantity,value CSV here");

  RankFlags rank;
  auto* c_rank = app.add_subcommand("rank-est", "Heuristic CP-rank estimate by ALS");
  c_rank->add_option("--det", rank.det, "Determinant tensor of order N");
  c_rank->add_option("--basis", rank.basis, "Basis tensor E_k, k as k1,..,kN (needs --k)");
  c_rank->add_option("--k", rank.k, "Mode dimension for --basis");
  c_rank->add_option("--file", rank.file, "Tensor text file");
  c_rank->add_option("--pmax", rank.pmax, "Largest rank to try")->required();
  c_rank->add_option("--restarts", rank.restarts, "Random restarts per rank")->capture_default_str();
  c_rank->add_option("--seed", rank.seed, "ALS seed")->capture_default_str();
  c_rank->add_option("--max-sweeps", rank.max_sweeps, "ALS sweeps per restart")->capture_default_str();
  c_rank->add_option("--tol", rank.tol, "Relative residual counted as an exact fit")->capture_default_str();
  c_rank->add_option("--out", rank.out_path, "Write the report CSV here instead of stdout");

  BasisFlags basis;
  auto* c_basis = app.add_subcommand("basis", "List the multi-index set or emit a basis tensor");
  c_basis->add_option("--n", basis.n, "Order N")->required();
  c_basis->add_option("--k", basis.k, "Mode dimension K")->required();
  c_basis->add_option("--index", basis.index, "Emit E_k for k = k1,..,kN in tensor text format");
  c_basis->add_option("--out", basis.out_path, "Output file (default stdout)");

  RoundtripFlags rt;
  auto* c_rt = app.add_subcommand("roundtrip", "TPF <-> coefficient tensor roundtrip check");
  c_rt->add_option("--file", rt.file, "TPF file (default: random CP)");
  c_rt->add_option("--n", rt.n, "Order N of the random TPF")->capture_default_str();
  c_rt->add_option("--k", rt.k, "Basis size K of the random TPF")->capture_default_str();
  c_rt->add_option("--p", rt.p, "Rank p of the random TPF")->capture_default_str();
  c_rt->add_option("--seed", rt.seed, "Seed for coefficients and sample points")->capture_default_str();
  c_rt->add_option("--basis", rt.basis, "monomial | indicator")->capture_default_str();
  c_rt->add_option("--points", rt.points, "Sample points")->capture_default_str();
  c_rt->add_option("--tensor-out", rt.tensor_out, "Write the coefficient tensor here");

  RunFlags tr;
  auto* c_train = app.add_subcommand("train", "Train one TNN and write its trace CSV and loss chart");
  tr.attach(c_train, "train");
  c_train->add_option("--seed", tr.seed, "Override the seed");
  c_train->add_option("--loss", tr.loss, "Override the loss: penalized | antisymmetrized");

  CompareFlags cmp;
  auto* c_cmp = app.add_subcommand("compare", "Penalized vs antisymmetrized runs from shared initializations");
  cmp.run.attach(c_cmp, "compare");
  c_cmp->add_option("--seeds", cmp.seeds, "Comma-separated seeds")->capture_default_str();
  c_cmp->add_option("--jobs", cmp.jobs, "Concurrent training jobs")->capture_default_str();

  ReportFlags rep;
  auto* c_rep = app.add_subcommand("report", "Summarize trace CSVs, optionally charting one or two");
  c_rep->add_option("inputs", rep.inputs, "Trace CSV files")->required();
  c_rep->add_option("--svg", rep.svg, "Chart output");
  c_rep->add_option("--column", rep.column, "Column to chart")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_bounds->parsed()) return cmd_bounds(bounds, out, err);
    if (c_rank->parsed()) return cmd_rank_est(rank, out, err);
    if (c_basis->parsed()) return cmd_basis(basis, out, err);
    if (c_rt->parsed()) return cmd_roundtrip(rt, out, err);
    if (c_train->parsed()) return cmd_train(tr, out, err);
    if (c_cmp->parsed()) return cmd_compare(cmp, out, err);
    if (c_rep->parsed()) return cmd_report(rep, out, err);
  } catch (const Usage& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kExitUsage;
}

}  // namespace antisym::cli
