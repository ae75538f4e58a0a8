#include <cmath>

#include <gtest/gtest.h>

#include "frontline/analytic.hpp"
#include "frontline/error.hpp"
#include "frontline/interface_law.hpp"

using namespace frontline;

namespace {

PowerLawParams pl(double n, double m, double gamma, double b0, double c0) {
  PowerLawParams p;
  p.n = n;
  p.m = m;
  p.gamma = gamma;
  p.b0 = b0;
  p.c0 = c0;
  return p;
}

double law(const PowerLawParams& p, double dw_dx) {
  return speed_power_law({dw_dx, 0.0, 1.0, 0.0}, p, validate_power_law(p));
}

FieldFunction constant(double v) {
  return [v](double, double) { return v; };
}

}  // namespace

TEST(PowerLawSpeed, WorkedValues) {
  EXPECT_NEAR(law(pl(6, 0, 1, 0, 0), -1.0), 1.2, 1e-15);
  EXPECT_NEAR(law(pl(1.5, 0.5, 1, 0, 1), -1.0), 3.5, 1e-15);
  EXPECT_NEAR(law(pl(2, 0, 1, 2, 0), -1.0), 0.0, 1e-15);
}

TEST(PowerLawSpeed, MatchesTurbulentLawAsPrinted) {
  for (double d : {-0.3, -1.0, -2.5}) {
    EXPECT_NEAR(law(pl(1.5, 0.5, 1, 0, 1), d), -3.0 * d - 1.0 / (2.0 * d), 1e-13);
  }
}

TEST(PowerLawSpeed, ConvectionOnlyEntersForLinearFlux) {
  EXPECT_NEAR(law(pl(2, 0, 2, 5, 0), -1.0), 2.0, 1e-15);
}

TEST(PowerLawSpeed, FlatSlopeInBalancedBranch) {
  try {
    law(pl(1.8, 0.2, 1, 0, -1), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SlopeTooFlat);
  }
}

TEST(PowerLawSpeed, PhysicalUnitsScaling) {
  // dw/dx = (dw/dy)/s: doubling s and dw/dy leaves the speed unchanged.
  const auto p = pl(1.8, 0.2, 1, 0, -1);
  const auto info = validate_power_law(p);
  const double dy = -0.7;
  const double a = speed_power_law({dy / 1.3, 0, 1.3, 0}, p, info);
  const double b = speed_power_law({2 * dy / 2.6, 0, 2.6, 0}, p, info);
  EXPECT_DOUBLE_EQ(a, b);
}

TEST(GeneralizedSpeed, WorkedValues) {
  GeneralizedCoefficients c;
  c.g = [](double) { return 1.0; };
  c.b0 = constant(0.0);
  c.c0 = constant(0.0);
  EXPECT_NEAR(speed_generalized({-1, 0, 1, 0}, c, pl(6, 0, 1, 0, 0)), 1.2, 1e-15);
  c.g = [](double) { return 2.0; };
  EXPECT_NEAR(speed_generalized({-1, 0, 1, 0}, c, pl(2, 0, 1, 0, 0)), 4.0, 1e-15);
  c.g = [](double) { return 1.0; };
  c.b0 = constant(-1.0);
  EXPECT_NEAR(speed_generalized({-0.5, 0, 1, 0}, c, pl(2, 0, 1, -1, 0)), 2.0, 1e-15);
}

TEST(GeneralizedSpeed, NonfiniteCoefficient) {
  GeneralizedCoefficients c;
  c.g = [](double) { return NAN; };
  c.b0 = constant(0.0);
  c.c0 = constant(0.0);
  try {
    speed_generalized({-1, 0, 1, 0}, c, pl(2, 0, 1, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CoefficientNonfinite);
  }
}

TEST(GeneralizedSpeed, BalancedReactionUsesFrontCoefficient) {
  GeneralizedCoefficients c;
  c.g = [](double) { return 1.0; };
  c.b0 = constant(0.0);
  c.c0 = [](double x, double t) { return -(1.0 + x + t); };
  c.p0 = 2.0;
  const double s = 0.5;
  const double t = 0.25;
  const double expected = -1.8 / 0.8 * -1.0 - 0.8 * (-(1.0 + s + t) * 2.0) / -1.0;
  EXPECT_NEAR(speed_generalized({-1, 0, s, t}, c, pl(1.8, 0.2, 1, 0, -1)), expected, 1e-14);
}

namespace {

OxygenParams oxygen(double a0, double b0, double c0, double m) {
  OxygenParams o;
  o.a0 = constant(a0);
  o.b0 = constant(b0);
  o.c0 = constant(c0);
  o.da0_dx = constant(0.0);
  o.dc0_dx = constant(0.0);
  o.m = m;
  return o;
}

}  // namespace

TEST(OxygenSpeed, WorkedValues) {
  EXPECT_NEAR(speed_oxygen({-0.7, 0.1, 1, 0}, oxygen(1, 0, -1, 0)), 3.0 * std::sqrt(2.0) * 0.1, 1e-14);
  EXPECT_NEAR(speed_oxygen({-0.7, 0.0, 1, 0}, oxygen(1, 0, -1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(speed_oxygen({-0.7, 0.0, 1, 0}, oxygen(1, 0.5, -1, 0)), -0.5, 1e-15);
}

TEST(OxygenSpeed, SignViolations) {
  for (const auto& o : {oxygen(0.0, 0, -1, 0), oxygen(1, 0, 0.5, 0)}) {
    try {
      speed_oxygen({-1, 0, 1, 0}, o);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CoefficientSignViolation);
    }
  }
}

// Front speed -u_t/u_x taken from the untransformed equation
// u_t = (a0 u)_xx + (b0 u)_x + c0 u^m on a profile w = u^{1/alpha} that has the
// travelling slope at x = s, in the limit x -> s.
TEST(OxygenSpeed, AgreesWithTheBulkEquationNearTheFront) {
  const double m = 0.5;
  const double alpha = 2.0 / (1.0 - m);
  const double s = 0.8;
  const double t = 0.0;
  auto a0 = [](double x) { return 1.0 + 0.3 * x; };
  const double a0x = 0.3;
  auto b0 = [](double x) { return 0.2 - 0.1 * x; };
  const double b0x = -0.1;
  auto c0 = [](double x) { return -2.0 + 0.4 * x; };
  const double c0x = 0.4;

  const double K = std::sqrt(-c0(s) / (alpha * (alpha - 1.0) * a0(s)));
  const double kappa = 0.35;
  auto w = [&](double x) { return K * (s - x) + kappa * (s - x) * (s - x) + 0.2 * std::pow(s - x, 3); };
  auto wx = [&](double x) { return -K - 2 * kappa * (s - x) - 0.6 * (s - x) * (s - x); };
  auto wxx = [&](double x) { return 2 * kappa + 1.2 * (s - x); };

  auto front_speed = [&](double eps) {
    const double x = s - eps;
    const double W = w(x);
    const double u = std::pow(W, alpha);
    const double ux = alpha * std::pow(W, alpha - 1) * wx(x);
    const double uxx =
        alpha * std::pow(W, alpha - 1) * wxx(x) + alpha * (alpha - 1) * std::pow(W, alpha - 2) * wx(x) * wx(x);
    const double ut = a0(x) * uxx + 2 * a0x * ux + b0(x) * ux + b0x * u + c0(x) * std::pow(u, m);
    return -ut / ux;
  };
  const double eps = 1e-3;
  const double limit = 2.0 * front_speed(eps / 2) - front_speed(eps);

  OxygenParams o;
  o.a0 = [&](double x, double) { return a0(x); };
  o.b0 = [&](double x, double) { return b0(x); };
  o.c0 = [&](double x, double) { return c0(x); };
  o.da0_dx = constant(a0x);
  o.dc0_dx = constant(c0x);
  o.m = m;
  const double law_speed = speed_oxygen({-K, 2 * kappa, s, t}, o);
  EXPECT_NEAR(law_speed, limit, 1e-5 * std::abs(limit));
}

TEST(ContaminantSpeed, WorkedValues) {
  ContaminantParams p;
  p.p = 0.5;
  p.D = 0.05;
  EXPECT_NEAR(speed_contaminant({-1, 0, 1, 0}, p), 0.1, 1e-15);
  EXPECT_EQ(speed_contaminant({0, 0, 1, 0}, p), 0.0);
  p.p = 0.25;
  p.D = 0.005;
  EXPECT_NEAR(speed_contaminant({-2, 0, 1, 0}, p), 0.005 / 0.75 * 2.0, 1e-15);
}

TEST(AnalyticIdentities, BarenblattFrontSpeed) {
  for (double n : {2.0, 3.0, 6.0}) {
    for (double t : {0.0, 1.0, 10.0}) {
      const double s = analytic::barenblatt_front(n, t);
      const double dw_dx = -2.0 * std::pow(s, -n);
      const double exact = s / ((n + 1.0) * (t + 1.0));
      const double got = law(pl(n, 0, 1, 0, 0), dw_dx);
      EXPECT_NEAR(got, exact, 1e-12 * exact) << "n=" << n << " t=" << t;
    }
  }
}

TEST(AnalyticIdentities, TurbulentFrontSpeed) {
  const auto sol = analytic::turbulent();
  for (double t : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const double a = analytic::turbulent_a(t);
    const double s = sol.interface(t);
    // w = sqrt(u) = sqrt(a^2+1) - a cosh(x/3)
    const double dw_dx = -a * std::sinh(s / 3.0) / 3.0;
    const double h = 1e-4;
    const double fd = (sol.interface(t + h) - sol.interface(t - h)) / (2 * h);
    EXPECT_NEAR(law(pl(1.5, 0.5, 1, 0, 1), dw_dx), fd, 1e-6 * std::abs(fd)) << "t=" << t;
  }
}

TEST(AnalyticIdentities, KersnerFrontSpeed) {
  for (const analytic::KersnerParams k : {analytic::KersnerParams{1.8, 1.0, 1.0, 1.0},
                                          analytic::KersnerParams{1.5, 2.0, 0.5, 1.5}}) {
    const auto sol = analytic::kersner(k);
    const double te = analytic::kersner_extinction_time(k);
    for (double frac : {0.0, 0.2, 0.5, 0.8}) {
      const double t = frac * te;
      const double a = 2 * k.p * (k.p + 1) / (k.p - 1) * t + (k.p - 1) * k.alpha;
      const double s = sol.interface(t);
      const double h = 1e-6 * te;
      const double fd = t == 0.0 ? (-3 * s + 4 * sol.interface(h) - sol.interface(2 * h)) / (2 * h)
                                 : (sol.interface(t + h) - sol.interface(t - h)) / (2 * h);
      const double got = law(pl(k.p, 2 - k.p, 1, 0, -k.C0), -2.0 * s / a);
      EXPECT_NEAR(got, fd, 1e-6 * std::max(1.0, std::abs(fd))) << "p=" << k.p << " t=" << t;
    }
  }
}
