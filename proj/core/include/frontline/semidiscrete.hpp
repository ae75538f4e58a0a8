#pragma once

#include <span>
#include <vector>

#include "frontline/interface_law.hpp"
#include "frontline/meshing.hpp"
#include "frontline/problem.hpp"
#include "frontline/stiff_ode.hpp"

namespace frontline {

struct Guards {
  double slope_guard = kDefaultSlopeGuard;
  double extinction_floor = 1e-10;
  double s_min = 1e-3;
  /// Length of the smoothstep blend from the initial boundary node value to
  /// the Dirichlet data; 0 disables it.
  double compatibility_window = 0.0;
};

struct RhsContext {
  ProblemSpec problem;
  Mesh mesh;
  TransformInfo transform;
  Guards guards;
  double t0 = 0.0;
  double initial_boundary_w = 0.0;  // C_0 of the initial state, for the Dirichlet blend
};

/// Unknown node values C (starting at y_0 or y_1, see first_node) and the front s.
/// The classical baseline has no front; s then holds the fixed domain length.
struct State {
  std::vector<double> C;
  double s = 1.0;
};

/// Nodes 0..N-1; node N is pinned to zero. Dirichlet problems drop node 0.
int first_node(const RhsContext& ctx);

State rhs_power_law(const State& state, double t, const RhsContext& ctx);
State rhs_oxygen(const State& state, double t, const RhsContext& ctx);
State rhs_contaminant(const State& state, double t, const RhsContext& ctx);

/// Conservative three-point scheme for du/dt = (u^p)_xx on nodes x_0..x_N:
/// symmetry at x_0, u(x_N) = 0. `u` and `x` have equal length; the returned
/// derivative of the pinned last node is 0.
std::vector<double> rhs_classical(std::span<const double> u, double t, std::span<const double> x, double p);

/// Ghost node C_{-1} from the flux condition -(u^n)_x - b0 u^gamma = -q at x = 0,
/// using params.n, params.gamma and params.b0.
double ghost_value(double C1, double C0, double s, double q, const PowerLawParams& params, double beta,
                   double alpha1);

enum class Extinction { Continue, Extinct };

Extinction extinction_check(const State& state, const Guards& guards);

/// Adapts a context to the integrator: the flat state is (C..., s) for front
/// problems and (C_0..C_{N-1}) for the classical baseline.
class SemidiscreteSystem {
 public:
  explicit SemidiscreteSystem(RhsContext ctx);

  const RhsContext& context() const noexcept { return ctx_; }
  bool tracks_interface() const noexcept { return tracks_; }
  int first_node() const noexcept { return first_; }
  int size() const noexcept;

  void operator()(double t, std::span<const double> y, std::span<double> dydt) const;
  OdeRhs as_rhs() const;

  double interface_speed(double t, std::span<const double> y) const;
  /// Boundary value of w at y_0 for Dirichlet problems.
  double boundary_value(double t) const;
  /// w at every node y_0..y_N (last entry 0).
  std::vector<double> profile(double t, std::span<const double> y) const;

  std::vector<double> pack(const State& state) const;
  State unpack(std::span<const double> y) const;
  /// Initial state from a full nodal profile w_0..w_N.
  State initial_state(std::span<const double> w, double s0) const;

 private:
  RhsContext ctx_;
  bool tracks_ = true;
  int first_ = 0;
};

}  // namespace frontline
