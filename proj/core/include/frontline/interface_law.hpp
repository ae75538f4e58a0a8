#pragma once

#include "frontline/problem.hpp"

namespace frontline {

constexpr double kDefaultSlopeGuard = 1e-8;

/// One-sided derivatives of w at the front x = s(t), in physical x units.
/// Callers holding d/dy values divide by s (and s^2 for the curvature).
struct BoundarySlopeSample {
  double dw_dx = 0.0;
  double d2w_dx2 = 0.0;
  double s = 1.0;
  double t = 0.0;
};

/// Front speed for du/dt = (u^n)_xx + b0 (u^gamma)_x + c0 u^m with u = w^{1/(n-1)}:
///
///   reaction-balanced (m + n = 2):  -n/(n-1) w_x - (n-1) c0 / w_x - G(gamma) b0
///   otherwise:                      -n/(n-1) w_x - G(gamma) b0
///
/// Throws SlopeTooFlat when the balanced branch would divide by |w_x| < slope_guard.
double speed_power_law(const BoundarySlopeSample& sample, const PowerLawParams& params, const TransformInfo& info,
                       double slope_guard = kDefaultSlopeGuard);

/// Same branch structure with g(t) on the diffusion term and coefficient
/// functions evaluated at (s, t).
double speed_generalized(const BoundarySlopeSample& sample, const GeneralizedCoefficients& coeffs,
                         const PowerLawParams& params, double slope_guard = kDefaultSlopeGuard);

/// Front speed for the nondegenerate absorption model with u = w^alpha,
/// alpha = 2/(1-m). Needs sample.d2w_dx2.
double speed_oxygen(const BoundarySlopeSample& sample, const OxygenParams& params);

/// -D / (rho a (1-p)) w_x with u = w^{1/(1-p)}.
double speed_contaminant(const BoundarySlopeSample& sample, const ContaminantParams& params);

}  // namespace frontline
