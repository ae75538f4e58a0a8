#include <cmath>

#include <gtest/gtest.h>

#include "frontline/error.hpp"
#include "frontline/stiff_ode.hpp"

using namespace frontline;

namespace {

OdeRhs decay(double lambda) {
  return [lambda](double, std::span<const double> y, std::span<double> f) { f[0] = lambda * y[0]; };
}

OdeRhs stiff_linear() {
  return [](double t, std::span<const double> y, std::span<double> f) {
    f[0] = -1000.0 * (y[0] - std::sin(t)) + std::cos(t);
  };
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidSpec;
}

}  // namespace

TEST(Integrate, ExponentialDecay) {
  Tolerances tol;
  tol.rtol = 1e-8;
  tol.atol = 1e-12;
  const std::vector<double> out{0.5, 1.0};
  const auto r = integrate(decay(-1.0), {1.0}, 0.0, 1.0, out, tol);
  ASSERT_EQ(r.times.size(), 2u);
  EXPECT_NEAR(r.states[1][0], std::exp(-1.0), 10 * 1e-8);
  EXPECT_NEAR(r.states[0][0], std::exp(-0.5), 10 * 1e-8);
  EXPECT_EQ(r.termination, Termination::Completed);
  EXPECT_EQ(r.t_final, 1.0);
}

TEST(Integrate, ConstantSolutionIsExact) {
  auto zero = [](double, std::span<const double>, std::span<double> f) { f[0] = 0.0; f[1] = 0.0; };
  const std::vector<double> out{0.0, 0.3, 2.0, 7.0};
  const auto r = integrate(zero, {2.5, -1.0}, 0.0, 7.0, out, Tolerances{});
  ASSERT_EQ(r.states.size(), 4u);
  for (const auto& s : r.states) {
    EXPECT_EQ(s[0], 2.5);
    EXPECT_EQ(s[1], -1.0);
  }
}

TEST(Integrate, StiffLinearProblem) {
  Tolerances tol;
  tol.rtol = 1e-6;
  const std::vector<double> out{1.0};
  const auto r = integrate(stiff_linear(), {0.0}, 0.0, 1.0, out, tol);
  EXPECT_NEAR(r.states[0][0], std::sin(1.0), 1e-4);
  EXPECT_LT(r.stats.steps_accepted, 1000);
  EXPECT_GT(r.stats.jacobian_evals, 0);
}

// Worst error over the run; y0 = 1 adds a fast transient e^{-1000t}.
TEST(Integrate, ToleranceProportionality) {
  std::vector<double> out;
  for (int k = 1; k <= 100; ++k) out.push_back(k / 100.0);
  std::vector<double> err;
  for (double rtol : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    Tolerances tol;
    tol.rtol = rtol;
    tol.atol = rtol * 1e-3;
    const auto r = integrate(stiff_linear(), {1.0}, 0.0, 1.0, out, tol);
    double e = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      e = std::max(e, std::abs(r.states[k][0] - std::sin(out[k]) - std::exp(-1000.0 * out[k])));
    }
    EXPECT_LE(e, 10 * rtol);
    err.push_back(e);
  }
  for (std::size_t k = 1; k < err.size(); ++k) EXPECT_LE(err[k], 2.0 * err[k - 1] + 1e-14) << k;
  EXPECT_LT(err.back(), err.front() / 100.0);
}

TEST(Integrate, ImplicitEulerInFixedStepMode) {
  const double lambda = -3.0;
  const double h = 0.1;
  Tolerances tol;
  tol.max_order = 1;
  tol.fixed_step = h;
  const std::vector<double> out{1.0};
  const auto r = integrate(decay(lambda), {1.0}, 0.0, 1.0, out, tol);
  const double expected = std::pow(1.0 / (1.0 - h * lambda), 10);
  EXPECT_EQ(r.stats.steps_accepted, 10);
  EXPECT_NEAR(r.states[0][0], expected, 1e-12 * expected);
}

TEST(Integrate, DenseOutputMatchesAStoppedRun) {
  Tolerances tol;
  tol.rtol = 1e-7;
  tol.atol = 1e-10;
  auto osc = [](double, std::span<const double> y, std::span<double> f) {
    f[0] = y[1];
    f[1] = -y[0] - 0.1 * y[1];
  };
  const std::vector<double> mid{1.37};
  const auto dense = integrate(osc, {1.0, 0.0}, 0.0, 4.0, mid, tol);
  const auto direct = integrate(osc, {1.0, 0.0}, 0.0, 1.37, mid, tol);
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(dense.states[0][k], direct.states[0][k], 20 * tol.rtol);
  }
}

TEST(Integrate, Deterministic) {
  const std::vector<double> out{0.25, 0.5, 1.0};
  const auto a = integrate(stiff_linear(), {0.0}, 0.0, 1.0, out, Tolerances{});
  const auto b = integrate(stiff_linear(), {0.0}, 0.0, 1.0, out, Tolerances{});
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.stats.rhs_evals, b.stats.rhs_evals);
}

TEST(Integrate, ObserverBracketsTheStop) {
  const std::vector<double> out{0.5, 2.0};
  auto below = [](double, std::span<const double> y) { return y[0] < 0.5; };
  const auto r = integrate(decay(-1.0), {1.0}, 0.0, 2.0, out, Tolerances{}, below);
  EXPECT_EQ(r.termination, Termination::Stopped);
  EXPECT_LT(r.t_before, std::log(2.0));
  EXPECT_GE(r.t_final, std::log(2.0));
  ASSERT_EQ(r.times.size(), 1u);
  EXPECT_EQ(r.times[0], 0.5);
}

TEST(Integrate, StatsAreConsistent) {
  const std::vector<double> out{1.0};
  const auto r = integrate(stiff_linear(), {0.0}, 0.0, 1.0, out, Tolerances{});
  EXPECT_GE(r.stats.rhs_evals, r.stats.steps_accepted);
  EXPECT_GE(r.stats.lu_decompositions, 1);
  EXPECT_GE(r.stats.newton_iters, r.stats.steps_accepted);
  EXPECT_GE(r.stats.steps_rejected, 0);
}

TEST(Integrate, RejectsBadInput) {
  const std::vector<double> out{1.0};
  Tolerances tol;
  tol.rtol = 1e-14;
  EXPECT_EQ(code_of([&] { integrate(decay(-1), {1.0}, 0.0, 1.0, out, tol); }), ErrorCode::InvalidSpec);
  tol = Tolerances{};
  tol.max_order = 6;
  EXPECT_EQ(code_of([&] { integrate(decay(-1), {1.0}, 0.0, 1.0, out, tol); }), ErrorCode::InvalidSpec);
  const std::vector<double> unsorted{0.8, 0.2};
  EXPECT_EQ(code_of([&] { integrate(decay(-1), {1.0}, 0.0, 1.0, unsorted, Tolerances{}); }),
            ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([&] { integrate(decay(-1), {NAN}, 0.0, 1.0, out, Tolerances{}); }), ErrorCode::InvalidSpec);
}

TEST(Integrate, RhsFailureAtStart) {
  auto bad = [](double, std::span<const double>, std::span<double>) {
    raise(ErrorCode::NonfiniteRhs, "always");
  };
  const std::vector<double> out{1.0};
  EXPECT_EQ(code_of([&] { integrate(bad, {1.0}, 0.0, 1.0, out, Tolerances{}); }), ErrorCode::RhsFailure);
}

TEST(Integrate, WallInTimeUnderflows) {
  auto wall = [](double t, std::span<const double> y, std::span<double> f) {
    if (t > 0.5) raise(ErrorCode::NonfiniteRhs, "wall");
    f[0] = -y[0];
  };
  const std::vector<double> out{1.0};
  try {
    integrate(wall, {1.0}, 0.0, 1.0, out, Tolerances{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepSizeUnderflow);
    EXPECT_NE(std::string(e.what()).find("t = "), std::string::npos);
  }
}

TEST(FdJacobian, LinearMap) {
  const Eigen::Matrix2d A{{1.5, -2.0}, {0.25, 3.0}};
  auto rhs = [&](double, std::span<const double> y, std::span<double> f) {
    f[0] = A(0, 0) * y[0] + A(0, 1) * y[1];
    f[1] = A(1, 0) * y[0] + A(1, 1) * y[1];
  };
  const std::vector<double> y{0.7, -1.1};
  const std::vector<double> scale{1.0, 1.0};
  const Eigen::MatrixXd J = fd_jacobian(rhs, y, 0.0, scale);
  EXPECT_LT((J - A).norm(), 1e-6 * A.norm());
}

TEST(FdJacobian, HandDifferentiated) {
  auto rhs = [](double, std::span<const double> y, std::span<double> f) {
    f[0] = y[1] * y[1];
    f[1] = y[0];
  };
  const std::vector<double> y{2.0, 3.0};
  const std::vector<double> scale{1.0, 1.0};
  const Eigen::MatrixXd J = fd_jacobian(rhs, y, 0.0, scale);
  EXPECT_NEAR(J(0, 0), 0.0, 1e-6);
  EXPECT_NEAR(J(0, 1), 6.0, 6e-6);
  EXPECT_NEAR(J(1, 0), 1.0, 1e-6);
  EXPECT_NEAR(J(1, 1), 0.0, 1e-6);
}

TEST(FdJacobian, ConstantRhs) {
  auto rhs = [](double, std::span<const double>, std::span<double> f) {
    f[0] = 3.0;
    f[1] = -1.0;
  };
  const std::vector<double> y{0.0, 5.0};
  const std::vector<double> scale{1e-3, 1e-3};
  EXPECT_EQ(fd_jacobian(rhs, y, 0.0, scale).norm(), 0.0);
}

TEST(FdJacobian, FailureIsReported) {
  auto rhs = [](double, std::span<const double> y, std::span<double> f) {
    if (y[0] != 1.0) raise(ErrorCode::NonfiniteRhs, "perturbed");
    f[0] = 0.0;
  };
  const std::vector<double> y{1.0};
  const std::vector<double> scale{1.0};
  EXPECT_EQ(code_of([&] { fd_jacobian(rhs, y, 0.0, scale); }), ErrorCode::RhsFailure);
}
