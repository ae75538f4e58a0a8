#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "frontline/meshing.hpp"

namespace frontline {

using TimeFunction = std::function<double(double t)>;
using FieldFunction = std::function<double(double x, double t)>;
using ProfileFunction = std::function<double(double x)>;

/// A reaction contribution c * u^exponent.
struct ReactionTerm {
  double coefficient = 0.0;
  double exponent = 0.0;
};

/// du/dt = d2/dx2 u^n + b0 d/dx u^gamma + c0 u^m + sum_k c_k u^{m_k}.
///
/// The extra terms must satisfy m_k + n > 2: they shape the bulk but are of
/// higher order at the front and do not enter the interface law.
struct PowerLawParams {
  double n = 2.0;
  double m = 0.0;
  double gamma = 1.0;
  double b0 = 0.0;
  double c0 = 0.0;
  std::vector<ReactionTerm> extra_reactions;
};

/// Coefficients of du/dt = g(t) d2/dx2 u^n + d/dx (b0(x,t) u^gamma) + c0(x,t) p0 u^m.
struct GeneralizedCoefficients {
  TimeFunction g;
  FieldFunction b0;
  FieldFunction c0;
  double p0 = 1.0;
  /// Optional; a central difference of b0 is used when empty.
  FieldFunction db0_dx;
};

/// Exponents plus coefficient functions. `exponents.b0` and `exponents.c0`
/// carry the sign pattern of the coefficient functions (zero, positive or
/// negative) and select the interface-law branch.
struct GeneralizedParams {
  PowerLawParams exponents;
  GeneralizedCoefficients coefficients;
};

/// du/dt = d2/dx2 (a0 u) + d/dx (b0 u) + c0 u^m on the positivity set.
struct OxygenParams {
  FieldFunction a0;
  FieldFunction b0;
  FieldFunction c0;
  FieldFunction da0_dx;
  FieldFunction dc0_dx;
  FieldFunction d2a0_dx2;  // optional, zero when empty
  FieldFunction db0_dx;    // optional, zero when empty
  double m = 0.0;
  double delta = 1e-12;
};

/// Equilibrium contaminant transport d/dt (u + rho Psi(u)) = D u_xx - v u_x
/// with Psi(u) = a u^p / (1 + b u^p).
struct ContaminantParams {
  double D = 0.05;
  double v = 1.0;
  double rho = 1.0;
  double a = 1.0;
  double b = 0.0;
  double p = 0.5;
};

/// Fixed-grid porous-medium baseline du/dt = d2/dx2 u^n on (0, length).
struct ClassicalParams {
  double n = 6.0;
  double length = 10.0;
};

using ModelParams =
    std::variant<PowerLawParams, GeneralizedParams, OxygenParams, ContaminantParams, ClassicalParams>;

enum class BoundaryKind { Dirichlet, Flux, Symmetry };

/// Condition at x = 0. Dirichlet data is u(0,t); flux data is q(t) in
/// -d/dx a(u) + b(u) = q.
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::Symmetry;
  TimeFunction data;

  static BoundaryCondition dirichlet(TimeFunction phi) { return {BoundaryKind::Dirichlet, std::move(phi)}; }
  static BoundaryCondition flux(TimeFunction q) { return {BoundaryKind::Flux, std::move(q)}; }
  static BoundaryCondition symmetry() { return {BoundaryKind::Symmetry, {}}; }
};

/// Nonnegative initial data supported on [0, L0]. An empty `u0` means u0 = 0,
/// which requires an auxiliary support radius.
struct InitialProfile {
  ProfileFunction u0;
  double L0 = 0.0;
  double aux_support = 0.0;
};

struct ProblemSpec {
  ModelParams model;
  BoundaryCondition boundary;
  InitialProfile initial;
};

enum class Branch { ReactionBalanced, DiffusionDominated, NoReaction };

std::string to_string(Branch branch);

/// u = w^exponent. For the power-law family exponent = 1/(n-1); for the
/// contaminant model 1/(1-p); for the oxygen model 2/(1-m); the classical
/// baseline solves for u itself (exponent 1).
struct TransformInfo {
  double exponent = 1.0;
  Branch branch = Branch::NoReaction;
};

constexpr double kDefaultRegularizationFloor = 1e-6;

TransformInfo validate(const ProblemSpec& spec);
TransformInfo validate_power_law(const PowerLawParams& params);
TransformInfo validate_contaminant(const ContaminantParams& params);
TransformInfo validate_oxygen(const OxygenParams& params);

/// 1 when gamma == 1, else 0.
double convection_switch(double gamma) noexcept;

struct RegularizedProfile {
  std::vector<double> w;  // node values at y_0..y_N, w.back() == 0
  double s0 = 0.0;
};

/// Samples max(u0(s0 y_i), floor (1 - y_i)^exponent)^{1/exponent}; the floor
/// term is a linear tent in w of height floor^{1/exponent}.
RegularizedProfile regularize_initial_profile(const InitialProfile& profile, double floor, const Mesh& mesh,
                                              const TransformInfo& transform);

}  // namespace frontline
