// frontline: run, sweep, compare and restart interface-tracking experiments.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "frontline/analytic.hpp"
#include "frontline/error.hpp"
#include "frontline/experiment.hpp"

namespace fs = std::filesystem;
using namespace frontline;

namespace {

int exit_code(ExitStatus s) { return static_cast<int>(s); }

void report(const ExperimentConfig& cfg, const RunOutcome& out) {
  std::printf("output     %s\n", cfg.output_dir.string().c_str());
  std::printf("status     %s at t = %.6g\n", out.status == RunStatus::Extinct ? "extinct" : "completed", out.t_final);
  if (out.status == RunStatus::Extinct) {
    std::printf("extinction in (%.9g, %.9g]\n", out.extinction_lo, out.extinction_hi);
  }
  std::printf("steps      %ld accepted, %ld rejected, %ld rhs evaluations, %ld jacobians\n",
              out.stats.steps_accepted, out.stats.steps_rejected, out.stats.rhs_evals, out.stats.jacobian_evals);
  if (out.errors) {
    double worst = 0.0;
    for (double v : out.errors->l2) worst = std::max(worst, v);
    std::printf("AL         %.6e over %d sections (max L2,rel %.6e)\n", out.errors->al, out.errors->r, worst);
    std::printf("front err  %.6e (max relative)\n", out.max_interface_error);
  }
  std::printf("wall time  %.3f s\n", out.wall_seconds);
}

int finish(const ExperimentConfig& cfg, const RunOutcome& out) {
  report(cfg, out);
  return exit_code(out.status == RunStatus::Extinct ? ExitStatus::Extinct : ExitStatus::Ok);
}

int cmd_run(const std::string& path, const std::string& out_dir) {
  Config c = Config::load(path);
  if (!out_dir.empty()) c.set("output.dir", out_dir);
  const ExperimentConfig cfg = build_experiment(c);
  return finish(cfg, run_experiment(cfg));
}

int cmd_sweep(const std::string& path, const std::string& grid, int jobs) {
  const Config c = Config::load(path);
  const ExperimentConfig base = build_experiment(c);
  const auto rows = sweep(c, grid, jobs);
  write_sweep_csv(rows, base.output_dir / "sweep.csv");
  const auto best = optimal_rows(rows);
  write_sweep_csv(best, base.output_dir / "optimal.csv");
  std::printf("%6s %9s %5s %3s %14s  %s\n", "N", "strategy", "M", "d", "AL", "status");
  for (const auto& r : rows) {
    std::printf("%6d %9s %5d %3d %14.6e  %s\n", r.N, to_string(r.strategy).c_str(), r.M, r.d, r.al, r.status.c_str());
  }
  for (const auto& r : best) std::printf("optimal for N=%d: M=%d (AL %.6e)\n", r.N, r.M, r.al);
  std::printf("wrote %s\n", (base.output_dir / "sweep.csv").string().c_str());
  return 0;
}

int cmd_compare(const std::string& solution, const std::string& oracle, const std::string& out_path) {
  const auto sections = read_solution_csv(solution);
  const auto report = compare_sections(sections, analytic::by_name(oracle));
  std::ostringstream os;
  write_error_csv(report, os);
  const fs::path target = out_path.empty() ? fs::path(solution).parent_path() / "error.csv" : fs::path(out_path);
  write_atomic(target, os.str());
  std::printf("AL %.6e over %d sections, wrote %s\n", report.al, report.r, target.string().c_str());
  return 0;
}

int cmd_restart(const std::string& trace_dir, double at, const std::string& mesh_text, const std::string& out_dir) {
  Config c = Config::load(fs::path(trace_dir) / "config.cfg");
  const auto trace = read_solution_csv(fs::path(trace_dir) / "solution.csv");
  int index = -1;
  for (std::size_t j = 0; j < trace.size(); ++j) {
    if (std::abs(trace[j].t - at) <= 1e-9 * std::max(1.0, std::abs(at))) index = static_cast<int>(j);
  }
  if (index < 0) {
    std::ostringstream os;
    os << "no stored section at t = " << at << " in " << trace_dir;
    raise(ErrorCode::MeshIncompatible, os.str());
  }
  const MeshSpec mesh = parse_mesh_spec(mesh_text);
  c.set("mesh.strategy", to_string(mesh.strategy));
  c.set("mesh.N", std::to_string(mesh.N));
  c.set("mesh.M", std::to_string(mesh.M));
  c.set("mesh.d", std::to_string(mesh.d));
  char t0[40];
  std::snprintf(t0, sizeof t0, "%.17g", trace[static_cast<std::size_t>(index)].t);
  c.set("solver.t0", t0);
  c.set("problem.initial", "trace");
  c.set("problem.initial.trace", fs::absolute(fs::path(trace_dir) / "solution.csv").string());
  c.set("problem.initial.section", std::to_string(index));
  c.set("output.dir", out_dir.empty() ? (fs::path(trace_dir) / "restart").string() : out_dir);
  const ExperimentConfig cfg = build_experiment(c);
  return finish(cfg, run_experiment(cfg));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interface-tracking solver for degenerate convection-diffusion-reaction problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "solve one experiment");
  run->add_option("config", config_path, "experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");

  std::string grid;
  int jobs = 1;
  auto* sw = app.add_subcommand("sweep", "run a mesh parameter grid and tabulate AL");
  sw->add_option("config", config_path, "base config")->required()->check(CLI::ExistingFile);
  sw->add_option("--grid", grid, "e.g. \"N=30;M=3..30;strategy=D4\" or \"N=10,20,50;M=N\"")->required();
  sw->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

  std::string solution;
  std::string oracle;
  std::string error_out;
  auto* cmp = app.add_subcommand("compare", "error report of a solution.csv against an analytic oracle");
  cmp->add_option("solution", solution, "solution.csv")->required()->check(CLI::ExistingFile);
  cmp->add_option("--oracle", oracle, "barenblatt:n=6, kersner:p=1.8,C0=1,alpha=1,L0=1, turbulent")->required();
  cmp->add_option("--out", error_out, "error table path (default: next to the solution)");

  std::string trace_dir;
  double at = 0.0;
  std::string mesh_text;
  auto* rs = app.add_subcommand("restart", "continue a stored run from one of its sections on a new mesh");
  rs->add_option("trace", trace_dir, "output directory of the donor run")->required()->check(CLI::ExistingDirectory);
  rs->add_option("--at", at, "section time to restart from")->required();
  rs->add_option("--mesh", mesh_text, "e.g. D4:N=60,M=20")->required();
  rs->add_option("--out", out_dir, "output directory (default: <trace>/restart)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_code(ExitStatus::UserError);
  }

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*sw) return cmd_sweep(config_path, grid, jobs);
    if (*cmp) return cmd_compare(solution, oracle, error_out);
    if (*rs) return cmd_restart(trace_dir, at, mesh_text, out_dir);
  } catch (const Error& e) {
    std::fprintf(stderr, "frontline: %s\n", e.what());
    return exit_code(is_user_error(e.code()) ? ExitStatus::UserError : ExitStatus::SolverFailure);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "frontline: %s\n", e.what());
    return exit_code(ExitStatus::SolverFailure);
  }
  return 0;
}
