// landau_cli: eval | integrate | bench | tables
// exit codes: 0 ok, 2 configuration error, 3 numerical failure

#include <CLI11.hpp>

#include "landau/cli_io.hpp"

using namespace landau;

namespace {

struct Flags {
  std::string problem = "A", scope = "local", approach = "CST2";
  std::vector<std::string> approaches;
  double t0 = 0.0;
};

void add_options(CLI::App& app, RunConfig& c, Flags& f) {
  app.set_config("--config", "", "key = value file; command-line flags override it");
  app.add_option("--problem", f.problem, "test problem A|B|C|D")->check(CLI::IsMember({"A", "B", "C", "D", "a", "b", "c", "d"}));
  app.add_option("--dim", c.dim, "velocity dimension")->check(CLI::IsMember({2, 3}));
  app.add_option("--modes", c.modes, "modes per axis (one value for all axes)");
  app.add_option("--domain", c.domain, "b (for [-b,b]^d), lo hi, or lo1 hi1 ... per axis");
  app.add_option("--box-cells", c.box_cells, "singularity box halfwidth in cells (-1: auto)");
  app.add_option("--refinement", c.refinement, "quadrature subcells per grid cell and axis")->check(CLI::PositiveNumber);
  app.add_option("--scope", f.scope, "quadrature scope local|whole")->check(CLI::IsMember({"local", "whole"}));
  app.add_option("--approach", f.approach, "CCT1 CCT2 CRT1 CRT2 CST1 CST2 (case-insensitive)");
  app.add_option("--approaches", f.approaches, "bench: approaches to compare (default: all admissible)");
  app.add_option("--rk-order", c.rk_order, "Runge-Kutta order")->check(CLI::Range(1, 4));
  app.add_option("--t0", f.t0, "initial time (default: problem default)");
  app.add_option("--T", c.T, "final time");
  app.add_option("--steps", c.steps, "uniform step count");
  app.add_option("--tau", c.tau, "uniform stepsize (instead of --steps)");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--threads", c.threads, "worker threads for precomputation")->check(CLI::PositiveNumber);
  app.add_option("--tables", c.tables, "table file (LNDT1)");
  app.add_option("--residue-tol", c.residue_tol, "relative tolerance for imaginary residues");
  app.add_option("--diag-every", c.diag_every, "steps between diagnostics records");
  app.add_option("--snapshot-every", c.snapshot_every, "steps between grid snapshots (0: none)");
  app.add_option("--repeat", c.repeat, "bench: evaluations per row");
}

int fail(int code, const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral Landau operator evaluation and time integration"};
  app.require_subcommand(1);
  RunConfig c;
  Flags f;
  add_options(app, c, f);
  auto* eval = app.add_subcommand("eval", "evaluate the operator once and compare with a closed form")->fallthrough();
  auto* integ = app.add_subcommand("integrate", "integrate the Landau equation")->fallthrough();
  auto* bench = app.add_subcommand("bench", "compare approaches and quadrature scopes")->fallthrough();
  auto* tables = app.add_subcommand("tables", "precompute and write a table file")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    c.problem = static_cast<char>(std::toupper(static_cast<unsigned char>(f.problem[0])));
    c.scope = f.scope == "whole" ? QuadratureScope::WholeDomain : QuadratureScope::Local;
    c.approach = parse_approach(f.approach);
    for (const auto& a : f.approaches) c.approaches.push_back(parse_approach(a));
    if (app.count("--t0")) c.t0 = f.t0;

    if (*eval) {
      c.command = Command::Eval;
      auto r = cmd_eval(c);
      if (r.q_error) std::cout << "rel_max " << fmt_sci(r.q_error->rel_max) << "  ";
      std::cout << "transforms " << r.ev.transform_count << "  eval " << fmt_sci(r.ev.timings.total) << " s\n";
    } else if (*integ) {
      c.command = Command::Integrate;
      auto r = cmd_integrate(c);
      if (r.failure) {
        double t_last = r.traj.times.empty() ? 0.0 : r.traj.times.back();
        return fail(3, std::string(r.failure->what()) + " (last good step " + std::to_string(r.traj.steps_done) +
                           ", t = " + fmt17(t_last) + ")");
      }
      std::cout << "steps " << r.traj.steps_done << "  mass " << fmt17(r.traj.diagnostics.back().mass) << "\n";
    } else if (*bench) {
      c.command = Command::Bench;
      for (const auto& r : cmd_bench(c))
        std::cout << to_string(r.approach) << " " << to_string(r.scope) << " pre " << fmt_sci(r.precompute_s)
                  << " eval " << fmt_sci(r.eval_s) << " transforms " << r.transform_count << " rel_max "
                  << (r.rel_max ? fmt_sci(*r.rel_max) : std::string("n/a")) << "\n";
    } else if (*tables) {
      c.command = Command::Tables;
      cmd_tables(c);
    }
  } catch (const Error& e) {
    return fail(is_numerical(e.code()) ? 3 : 2, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
  return 0;
}
