#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "frontline/config.hpp"
#include "frontline/error.hpp"
#include "frontline/metrics.hpp"
#include "frontline/semidiscrete.hpp"
#include "frontline/stiff_ode.hpp"

namespace frontline {

/// Exit statuses of the command-line tool.
enum class ExitStatus { Ok = 0, UserError = 1, SolverFailure = 2, Extinct = 3 };

/// True for codes caused by the input rather than by the solve.
bool is_user_error(ErrorCode code) noexcept;

struct ExperimentConfig {
  Config source;
  std::string model;  // power_law, generalized, oxygen, contaminant, classical
  ProblemSpec problem;
  TransformInfo transform;
  MeshSpec mesh;
  Tolerances tol;
  Guards guards;
  double floor = kDefaultRegularizationFloor;
  double t0 = 0.0;
  double t1 = 1.0;
  int sections = 30;
  std::filesystem::path output_dir;
  std::optional<std::string> oracle;
  bool write_interface = true;
  /// Nodal w on the experiment mesh taken from a stored trace; replaces
  /// problem.initial when set.
  std::optional<std::vector<double>> initial_w;
  double initial_s = 0.0;
};

/// Builds and validates an experiment. Relative output directories are
/// resolved against FRONTLINE_OUTPUT_ROOT (default: ./runs).
ExperimentConfig build_experiment(const Config& config);

Mesh experiment_mesh(const ExperimentConfig& cfg);

/// Section of a run, with the transformed variable kept for restarts.
struct TraceSection {
  double t = 0.0;
  double s = 0.0;
  std::vector<double> y;
  std::vector<double> w;
  std::vector<double> u;

  Section section() const { return {t, s, y, u}; }
};

struct InterfaceSample {
  double t = 0.0;
  double s = 0.0;
};

enum class RunStatus { Completed, Extinct };

struct RunOutcome {
  RunStatus status = RunStatus::Completed;
  std::vector<TraceSection> sections;
  std::vector<InterfaceSample> interface;
  IntegratorStats stats;
  double t_final = 0.0;
  double extinction_lo = 0.0;  // extinction happened in (lo, hi]
  double extinction_hi = 0.0;
  std::optional<ErrorReport> errors;
  double max_interface_error = 0.0;  // relative, over accepted steps, when an oracle is set
  double wall_seconds = 0.0;
};

/// Solves and, when `write` is set, writes solution.csv, interface.csv,
/// stats.csv, config.cfg and (with an oracle) error.csv into output_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg, bool write = true);

/// Error report for sections whose analytic solution is nonzero.
ErrorReport compare_sections(const std::vector<TraceSection>& sections, const analytic::Solution& oracle);

void write_solution_csv(const std::vector<TraceSection>& sections, const std::filesystem::path& path);
std::vector<TraceSection> read_solution_csv(const std::filesystem::path& path);

/// Writes via a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// Carries a stored section over to a new grid: w by monotone cubic
/// interpolation in y, s unchanged. The identical grid copies exactly.
std::vector<double> regrid_restart(const TraceSection& donor, const Mesh& mesh, double extinction_floor = 1e-10);

/// "D4:N=60,M=20" or "D2:M=10,d=3".
MeshSpec parse_mesh_spec(const std::string& text);

struct SweepRow {
  int N = 0;
  MeshStrategy strategy = MeshStrategy::D4;
  int M = 0;
  int d = 0;
  double al = 0.0;
  double max_l2 = 0.0;
  std::string status;
};

/// Grid syntax: "N=10,20,50;M=N;strategy=D4" or "N=30 M=3..30". M=N couples
/// M to N. Every combination runs in its own subdirectory of the base
/// output directory; failures are recorded in the row.
std::vector<SweepRow> sweep(const Config& base, const std::string& grid, int jobs);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
/// Row with the smallest AL for each N.
std::vector<SweepRow> optimal_rows(const std::vector<SweepRow>& rows);

}  // namespace frontline
