#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "landau/landau.hpp"

namespace landau {

enum class Command { Eval, Integrate, Bench, Tables };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::Eval: return "eval";
    case Command::Integrate: return "integrate";
    case Command::Bench: return "bench";
    case Command::Tables: return "tables";
  }
  return "?";
}

struct RunConfig {
  Command command = Command::Eval;
  char problem = 'A';
  int dim = 2;
  std::vector<int> modes;       // empty: problem default; one value: all axes
  std::vector<double> domain;   // empty: problem default; b | lo hi | lo1 hi1 ... per axis
  int box_cells = -1;           // -1: 4 cells for singular kernels, none otherwise
  int refinement = 2;
  QuadratureScope scope = QuadratureScope::Local;
  Approach approach = Approach::CST2;
  std::vector<Approach> approaches;  // bench rows; empty: every approach the kernel admits
  int rk_order = 4;
  std::optional<double> t0;
  double T = 0.0;
  int steps = 0;
  double tau = 0.0;  // alternative to steps
  std::string out = "out";
  int threads = 1;
  std::string tables;  // table file: loaded by eval/integrate when present, written by `tables`
  double residue_tol = default_residue_tolerance();
  int diag_every = 1;
  int snapshot_every = 0;
  int repeat = 1;  // bench: evaluations per row, fastest kept
};

// ---- csv ------------------------------------------------------------------

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& p, const std::vector<std::string>& header) : path_(p) {
    os_.open(p);
    if (!os_) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }
  void row(std::initializer_list<double> xs) { row(std::vector<double>(xs)); }
  void row(const std::vector<double>& xs) {
    std::vector<std::string> c;
    for (double x : xs) c.push_back(fmt17(x));
    row(c);
  }

 private:
  std::filesystem::path path_;
  std::ofstream os_;
};

// ---- config ---------------------------------------------------------------

// `key = value` lines accepted by --config
inline std::string config_text(const RunConfig& c) {
  std::ostringstream os;
  auto join = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      if constexpr (std::is_same_v<std::decay_t<decltype(v[0])>, double>)
        s += fmt17(v[i]);
      else
        s += std::to_string(v[i]);
    }
    return "[" + s + "]";
  };
  os << "problem = " << c.problem << "\n";
  os << "dim = " << c.dim << "\n";
  if (!c.modes.empty()) os << "modes = " << join(c.modes) << "\n";
  if (!c.domain.empty()) os << "domain = " << join(c.domain) << "\n";
  os << "box-cells = " << c.box_cells << "\n";
  os << "refinement = " << c.refinement << "\n";
  os << "scope = " << to_string(c.scope) << "\n";
  os << "approach = " << to_string(c.approach) << "\n";
  if (!c.approaches.empty()) {
    os << "approaches = [";
    for (std::size_t i = 0; i < c.approaches.size(); ++i) os << (i ? "," : "") << to_string(c.approaches[i]);
    os << "]\n";
  }
  os << "rk-order = " << c.rk_order << "\n";
  if (c.t0) os << "t0 = " << fmt17(*c.t0) << "\n";
  if (c.T != 0.0) os << "T = " << fmt17(c.T) << "\n";
  if (c.steps) os << "steps = " << c.steps << "\n";
  if (c.tau != 0.0) os << "tau = " << fmt17(c.tau) << "\n";
  os << "out = " << c.out << "\n";
  os << "threads = " << c.threads << "\n";
  if (!c.tables.empty()) os << "tables = " << c.tables << "\n";
  os << "residue-tol = " << fmt17(c.residue_tol) << "\n";
  os << "diag-every = " << c.diag_every << "\n";
  os << "snapshot-every = " << c.snapshot_every << "\n";
  os << "repeat = " << c.repeat << "\n";
  return os.str();
}

// ---- setup ----------------------------------------------------------------

struct RunSetup {
  TestProblem problem;
  DomainPtr domain;
};

inline RunSetup make_setup(const RunConfig& c) {
  RunSetup s{make_problem(c.problem, c.dim), nullptr};
  int d = c.dim;
  std::vector<int> M;
  if (c.modes.empty())
    M.assign(d, s.problem.default_modes);
  else if (c.modes.size() == 1)
    M.assign(d, c.modes[0]);
  else if (static_cast<int>(c.modes.size()) == d)
    M = c.modes;
  else
    throw Error(ErrorCode::InvalidArgument, "--modes takes 1 or d values");

  std::vector<Interval> iv;
  const auto& D = c.domain;
  if (D.empty())
    iv.assign(d, {-s.problem.half_width, s.problem.half_width});
  else if (D.size() == 1)
    iv.assign(d, {-D[0], D[0]});
  else if (D.size() == 2)
    iv.assign(d, {D[0], D[1]});
  else if (static_cast<int>(D.size()) == 2 * d)
    for (int a = 0; a < d; ++a) iv.push_back({D[2 * a], D[2 * a + 1]});
  else
    throw Error(ErrorCode::InvalidArgument, "--domain takes 1, 2 or 2d values");

  int cells = c.box_cells >= 0 ? c.box_cells : (s.problem.kernel.is_singular() ? 4 : 0);
  s.domain = build_domain_cells(iv, M, cells);
  return s;
}

inline bool admits(Approach a, const KernelSpec& k) {
  if (constant_variant(a)) return k.is_constant();
  if (regular_variant(a)) return !k.is_singular();
  return true;
}

// fail before the (possibly long) precomputation
inline void require_admissible(Approach a, const RunSetup& s) {
  if (!admits(a, s.problem.kernel))
    throw Error(ErrorCode::ApproachKernelMismatch,
                std::string(to_string(a)) + " cannot handle the kernel " + s.problem.kernel.name());
}

inline BuildOptions build_options(const RunConfig& c) { return {c.refinement, c.scope, c.threads}; }

// loads the table file when one is named and exists, otherwise builds
inline PrecomputedTables obtain_tables(const RunConfig& c, const RunSetup& s, bool* loaded = nullptr) {
  if (loaded) *loaded = false;
  if (!c.tables.empty() && std::filesystem::exists(c.tables)) {
    if (loaded) *loaded = true;
    return load_tables(c.tables);
  }
  return build_tables(s.domain, s.problem.kernel, build_options(c));
}

inline std::filesystem::path prepare_out(const RunConfig& c) {
  std::filesystem::path p(c.out);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + p.string() + ": " + ec.message());
  std::ofstream(p / "run_config.txt") << config_text(c);
  return p;
}

inline std::vector<std::string> axis_names(const char* stem, int d) {
  std::vector<std::string> v;
  for (int a = 1; a <= d; ++a) v.push_back(stem + std::to_string(a));
  return v;
}

// ---- eval -----------------------------------------------------------------

struct EvalReport {
  LandauEvaluation ev;
  std::optional<ErrorNorms> q_error;
  std::vector<ErrorNorms> qc_error;
  StageTimings pre;
};

inline EvalReport cmd_eval(const RunConfig& c) {
  auto s = make_setup(c);
  require_admissible(c.approach, s);
  auto t = obtain_tables(c, s);
  auto f = s.problem.sample(s.domain);
  EvalReport r;
  r.ev = evaluate(c.approach, f, t, {c.residue_tol, false});
  r.pre = t.timings;
  auto out = prepare_out(c);
  const auto& d = *s.domain;

  {
    std::vector<std::string> h = axis_names("l", d.dim);
    for (auto& x : axis_names("v", d.dim)) h.push_back(x);
    h.push_back("Q");
    for (auto& x : axis_names("Qc", d.dim)) h.push_back(x);
    CsvWriter w(out / "operator_grid.csv", h);
    for (std::size_t n = 0; n < d.size(); ++n) {
      Index idx = d.unravel(n);
      Vec v = d.point(n);
      std::vector<std::string> row;
      for (int a = 0; a < d.dim; ++a) row.push_back(std::to_string(idx[a]));
      for (int a = 0; a < d.dim; ++a) row.push_back(fmt17(v[a]));
      row.push_back(fmt17(r.ev.Q_values[n]));
      for (int a = 0; a < d.dim; ++a) row.push_back(fmt17(r.ev.Qc[a][n]));
      w.row(row);
    }
  }

  if (s.problem.reference_Q) {
    r.q_error = error_norms(r.ev.Q_values, *s.problem.reference_Q);
    CsvWriter w(out / "errors.csv", {"quantity", "abs_max", "rel_max", "l2"});
    auto put = [&](const std::string& q, const ErrorNorms& e) {
      w.row({q, fmt17(e.abs_max), fmt17(e.rel_max), fmt17(e.l2)});
    };
    put("Q", *r.q_error);
    const auto& ref = *s.problem.reference_Qc;
    for (int a = 0; a < d.dim; ++a) {
      r.qc_error.push_back(error_norms(r.ev.Qc[a], [&](const Vec& v) { return ref(v)[a]; }));
      put("Qc" + std::to_string(a + 1), r.qc_error.back());
    }
  } else {
    std::cerr << "note: problem " << c.problem << " has no closed-form operator; errors.csv not written\n";
  }

  {
    CsvWriter w(out / "timings.csv", {"stage", "value"});
    auto put = [&](const std::string& k, double v) { w.row({k, fmt17(v)}); };
    put("regularize_s", r.pre.regularize);
    put("psi_transform_s", r.pre.psi_transform);
    put("correlation_s", r.pre.correlation);
    put("quadrature_s", r.pre.quadrature);
    put("precompute_s", r.pre.total);
    put("eval_gradient_s", r.ev.timings.gradient);
    put("eval_fields_s", r.ev.timings.fields);
    put("eval_assemble_s", r.ev.timings.assemble);
    put("eval_divergence_s", r.ev.timings.divergence);
    put("eval_s", r.ev.timings.total);
    w.row({"transform_count", std::to_string(r.ev.transform_count)});
    put("max_imag_residue", r.ev.max_residue);
  }
  return r;
}

// ---- integrate ------------------------------------------------------------

struct IntegrateReport {
  Trajectory traj;
  std::optional<Error> failure;  // BlowUp / residue failure after partial output
};

inline void write_snapshot(const std::filesystem::path& p, const Snapshot& s) {
  const auto& d = *s.values.domain();
  std::vector<std::string> h = axis_names("v", d.dim);
  h.push_back("f");
  CsvWriter w(p, h);
  for (std::size_t n = 0; n < d.size(); ++n) {
    Vec v = d.point(n);
    std::vector<double> row(v.begin(), v.begin() + d.dim);
    row.push_back(s.values[n]);
    w.row(row);
  }
}

inline IntegrateReport cmd_integrate(const RunConfig& c) {
  auto s = make_setup(c);
  require_admissible(c.approach, s);
  auto t = obtain_tables(c, s);
  IntegrationPlan plan;
  plan.t0 = c.t0 ? *c.t0 : s.problem.default_t0;
  plan.T = c.T;
  if (c.tau > 0 && c.steps <= 0) {
    double n = std::round((plan.T - plan.t0) / c.tau);
    if (n < 1 || std::abs(n * c.tau - (plan.T - plan.t0)) > 1e-9 * std::max(1.0, std::abs(plan.T)))
      throw Error(ErrorCode::InvalidArgument, "--tau must divide T - t0");
    plan.steps = static_cast<int>(n);
  } else {
    plan.steps = c.steps;
  }
  plan.rk_order = c.rk_order;
  plan.approach = c.approach;
  plan.diagnostics_every = c.diag_every;
  plan.snapshot_every = c.snapshot_every;
  plan.eval = {c.residue_tol, false};
  plan.taus();  // validate before any output

  GridField f0 = s.problem.exact_solution ? s.problem.sample_exact(s.domain, plan.t0) : s.problem.sample(s.domain);
  auto out = prepare_out(c);
  IntegrateReport r;
  try {
    integrate(f0, plan, t, r.traj);
  } catch (const Error& e) {
    if (!is_numerical(e.code())) throw;
    r.failure = e;
  }

  int d = c.dim;
  {
    std::vector<std::string> h{"t", "mass"};
    for (auto& x : axis_names("p", d)) h.push_back(x);
    for (const char* x : {"energy", "entropy", "positive_fraction"}) h.push_back(x);
    CsvWriter w(out / "diagnostics.csv", h);
    for (const auto& rec : r.traj.diagnostics) {
      std::vector<double> row{rec.t, rec.mass};
      for (int a = 0; a < d; ++a) row.push_back(rec.momentum[a]);
      row.insert(row.end(), {rec.energy, rec.entropy, rec.positive_fraction});
      w.row(row);
    }
  }
  if (s.problem.exact_solution) {
    CsvWriter w(out / "error_vs_exact.csv", {"t", "abs_max", "rel_max", "l2"});
    for (const auto& snap : r.traj.snapshots) {
      auto e = error_norms(snap.values, s.problem.sample_exact(s.domain, snap.t));
      w.row({snap.t, e.abs_max, e.rel_max, e.l2});
    }
  }
  if (c.snapshot_every > 0)
    for (std::size_t i = 0; i < r.traj.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
      write_snapshot(out / name, r.traj.snapshots[i]);
    }
  return r;
}

// ---- bench ----------------------------------------------------------------

struct BenchRow {
  Approach approach;
  QuadratureScope scope;
  double precompute_s = 0, eval_s = 0;
  int transform_count = 0;
  std::optional<double> rel_max;
};

inline std::vector<BenchRow> cmd_bench(const RunConfig& c) {
  auto s = make_setup(c);
  std::vector<Approach> list = c.approaches;
  if (list.empty())
    for (Approach a : {Approach::CCT1, Approach::CCT2, Approach::CRT1, Approach::CRT2, Approach::CST1, Approach::CST2})
      if (admits(a, s.problem.kernel)) list.push_back(a);
  auto f = s.problem.sample(s.domain);

  std::vector<BenchRow> rows;
  auto run = [&](const PrecomputedTables& t, Approach a) {
    BenchRow r{a, t.scope, t.timings.total, 0.0, 0, std::nullopt};
    double best = 1e300;
    LandauEvaluation ev;
    for (int k = 0; k < std::max(1, c.repeat); ++k) {
      ev = evaluate(a, f, t, {c.residue_tol, false});
      best = std::min(best, ev.timings.total);
    }
    r.eval_s = best;
    r.transform_count = ev.transform_count;
    if (s.problem.reference_Q) r.rel_max = error_norms(ev.Q_values, *s.problem.reference_Q).rel_max;
    rows.push_back(r);
  };

  BuildOptions local = build_options(c);
  local.scope = QuadratureScope::Local;
  auto tl = build_tables(s.domain, s.problem.kernel, local);
  for (Approach a : list) run(tl, a);
  // whole-domain quadrature counterpart (only CS* accept such tables)
  if (!s.problem.kernel.is_singular() && !s.problem.kernel.is_constant()) {
    BuildOptions whole = local;
    whole.scope = QuadratureScope::WholeDomain;
    auto tw = build_tables(s.domain, s.problem.kernel, whole);
    for (Approach a : list)
      if (!constant_variant(a) && !regular_variant(a)) run(tw, a);
  }

  auto out = prepare_out(c);
  CsvWriter w(out / "bench.csv", {"approach", "scope", "precompute_s", "eval_s", "transform_count", "rel_max"});
  for (const auto& r : rows)
    w.row({to_string(r.approach), to_string(r.scope), fmt17(r.precompute_s), fmt17(r.eval_s),
           std::to_string(r.transform_count), r.rel_max ? fmt17(*r.rel_max) : std::string("nan")});
  return rows;
}

// ---- tables ---------------------------------------------------------------

inline std::string cmd_tables(const RunConfig& c) {
  auto s = make_setup(c);
  auto t = build_tables(s.domain, s.problem.kernel, build_options(c));
  std::string path = c.tables;
  if (path.empty()) path = (prepare_out(c) / "tables.lndt").string();
  save_tables(path, t);
  std::cout << "wrote " << path << ": " << t.S.size() << " S tables, " << t.W.size() << " W tables, "
            << t.moment_count() << " moments, precompute " << fmt_sci(t.timings.total) << " s\n";
  return path;
}

}  // namespace landau
