#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace frontline {

/// dydt = f(t, y). The callable may throw frontline::Error; inside a step
/// that is treated as a failed Newton solve and the step is retried smaller.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Called after every accepted step; returning true stops the integration.
using StepObserver = std::function<bool(double t, std::span<const double> y)>;

struct Tolerances {
  double rtol = 1e-6;
  double atol = 1e-9;
  std::vector<double> atol_components;  // overrides atol when non-empty
  int max_order = 5;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 selects automatically
  /// When positive, every step has this length: no error control and no
  /// step-size change; the order still ramps up to max_order.
  double fixed_step = 0.0;
};

struct IntegratorStats {
  long steps_accepted = 0;
  long steps_rejected = 0;
  long rhs_evals = 0;
  long jacobian_evals = 0;
  long lu_decompositions = 0;
  long newton_iters = 0;
  long clamp_events = 0;
};

enum class Termination { Completed, Stopped };

struct IntegrationResult {
  std::vector<double> times;               // output times actually reached
  std::vector<std::vector<double>> states;  // one state per entry of `times`
  IntegratorStats stats;
  Termination termination = Termination::Completed;
  double t_final = 0.0;
  std::vector<double> y_final;
  /// For Termination::Stopped: the observer fired on the step (t_before, t_final].
  double t_before = 0.0;
};

/// Variable-order (1..5), variable-step backward differentiation formulas in
/// the quasi-constant-step difference form, modified Newton with a
/// finite-difference Jacobian, and polynomial dense output.
IntegrationResult integrate(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                            std::span<const double> output_times, const Tolerances& tol,
                            const StepObserver& observer = {});

/// Forward-difference Jacobian; column j uses the increment
/// max(sqrt(eps) |y_j|, sqrt(eps) scale_j). `f0` may be passed to save one
/// evaluation.
Eigen::MatrixXd fd_jacobian(const OdeRhs& rhs, std::span<const double> y, double t, std::span<const double> scale,
                            std::span<const double> f0 = {});

}  // namespace frontline
