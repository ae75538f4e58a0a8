#include "frontline/interface_law.hpp"

#include <cmath>
#include <sstream>

#include "frontline/error.hpp"

namespace frontline {

namespace {

void check_sample(const BoundarySlopeSample& sample) {
  if (!std::isfinite(sample.dw_dx) || !std::isfinite(sample.d2w_dx2) || !std::isfinite(sample.s)) {
    raise(ErrorCode::NonfiniteRhs, "non-finite boundary derivative sample");
  }
}

double finite_coefficient(double value, const char* name, const BoundarySlopeSample& sample) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << name << " is not finite at (x, t) = (" << sample.s << ", " << sample.t << ")";
    raise(ErrorCode::CoefficientNonfinite, os.str());
  }
  return value;
}

double balanced_reaction(double coefficient, double n, double dw_dx, double slope_guard) {
  if (std::abs(dw_dx) < slope_guard) {
    std::ostringstream os;
    os << "|dw/dx| = " << std::abs(dw_dx) << " below guard " << slope_guard;
    raise(ErrorCode::SlopeTooFlat, os.str());
  }
  return -(n - 1.0) * coefficient / dw_dx;
}

}  // namespace

double speed_power_law(const BoundarySlopeSample& sample, const PowerLawParams& params, const TransformInfo& info,
                       double slope_guard) {
  check_sample(sample);
  const double n = params.n;
  double speed = -n / (n - 1.0) * sample.dw_dx - convection_switch(params.gamma) * params.b0;
  if (info.branch == Branch::ReactionBalanced) {
    speed += balanced_reaction(params.c0, n, sample.dw_dx, slope_guard);
  }
  return speed;
}

double speed_generalized(const BoundarySlopeSample& sample, const GeneralizedCoefficients& coeffs,
                         const PowerLawParams& params, double slope_guard) {
  check_sample(sample);
  const double n = params.n;
  const double g = finite_coefficient(coeffs.g(sample.t), "g", sample);
  const double b0 = finite_coefficient(coeffs.b0(sample.s, sample.t), "b0", sample);
  double speed = -n * g / (n - 1.0) * sample.dw_dx - convection_switch(params.gamma) * b0;
  const bool balanced = params.c0 != 0.0 && std::abs(params.m + params.n - 2.0) <= 1e-12;
  if (balanced) {
    const double c0 = finite_coefficient(coeffs.c0(sample.s, sample.t), "c0", sample);
    speed += balanced_reaction(c0 * coeffs.p0, n, sample.dw_dx, slope_guard);
  }
  return speed;
}

double speed_oxygen(const BoundarySlopeSample& sample, const OxygenParams& params) {
  check_sample(sample);
  const double x = sample.s;
  const double t = sample.t;
  const double a0 = finite_coefficient(params.a0(x, t), "a0", sample);
  const double b0 = finite_coefficient(params.b0(x, t), "b0", sample);
  const double c0 = finite_coefficient(params.c0(x, t), "c0", sample);
  const double da0 = finite_coefficient(params.da0_dx(x, t), "da0/dx", sample);
  const double dc0 = finite_coefficient(params.dc0_dx(x, t), "dc0/dx", sample);
  if (a0 < params.delta || c0 > -params.delta) {
    std::ostringstream os;
    os << "need a0 >= delta and c0 <= -delta at (" << x << ", " << t << "), got a0 = " << a0 << ", c0 = " << c0;
    raise(ErrorCode::CoefficientSignViolation, os.str());
  }
  const double alpha = 2.0 / (1.0 - params.m);
  const double radicand = -alpha * (alpha - 1.0) * a0 / c0;
  if (!(radicand >= 0.0)) raise(ErrorCode::CoefficientSignViolation, "negative square-root argument in front law");
  return (2.0 * alpha - 1.0) * a0 * std::sqrt(radicand) * sample.d2w_dx2 - b0 - (alpha + 1.0) * da0 +
         (alpha - 1.0) * dc0 * a0 / c0;
}

double speed_contaminant(const BoundarySlopeSample& sample, const ContaminantParams& params) {
  check_sample(sample);
  const double denom = params.rho * params.a * (1.0 - params.p);
  if (!(denom > 0.0)) raise(ErrorCode::InvalidSpec, "rho a (1 - p) must be positive");
  return -params.D / denom * sample.dw_dx;
}

}  // namespace frontline
