#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "frontline/analytic.hpp"
#include "frontline/error.hpp"
#include "frontline/meshing.hpp"
#include "frontline/metrics.hpp"

using namespace frontline;

namespace {

Section exact_section(const analytic::Solution& sol, const Mesh& mesh, double t, double factor = 1.0) {
  Section sec;
  sec.t = t;
  sec.s = sol.interface(t);
  sec.y = mesh.points();
  for (double y : sec.y) sec.u.push_back(factor * sol.eval(sec.s * y, t));
  return sec;
}

double fine_quadrature(const std::function<double(double)>& un, const std::function<double(double)>& ua,
                       double length, double k) {
  const int n = 10000;
  const double h = length / n;
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * h;
    num += std::pow(std::abs(un(x) - ua(x)), k) * h;
    den += std::pow(std::abs(ua(x)), k) * h;
  }
  return std::pow(num / den, 1.0 / k);
}

}  // namespace

TEST(RelativeError, ExactIsZero) {
  const auto sol = analytic::barenblatt(6);
  const Mesh mesh = build_mesh({MeshStrategy::D4, 20, 10, 3});
  const auto sec = exact_section(sol, mesh, 3.0);
  EXPECT_EQ(relative_error(sec, sol, Norm::L1), 0.0);
  EXPECT_EQ(relative_error(sec, sol, Norm::L2), 0.0);
}

TEST(RelativeError, Homogeneity) {
  const auto sol = analytic::turbulent();
  const Mesh mesh = build_mesh({MeshStrategy::D4, 30, 10, 3});
  const auto sec = exact_section(sol, mesh, 1.0, 1.03);
  EXPECT_NEAR(relative_error(sec, sol, Norm::L1), 0.03, 1e-13);
  EXPECT_NEAR(relative_error(sec, sol, Norm::L2), 0.03, 1e-13);
}

TEST(RelativeError, ScaleInvariance) {
  const auto sol = analytic::barenblatt(3);
  const Mesh mesh = build_mesh({MeshStrategy::D4, 40, 20, 3});
  Section sec = exact_section(sol, mesh, 1.0);
  for (std::size_t i = 0; i < sec.u.size(); ++i) sec.u[i] *= 1.0 + 0.1 * sec.y[i];
  const double lambda = 7.5;
  analytic::Solution scaled = sol;
  scaled.eval = [&](double x, double t) { return lambda * sol.eval(x, t); };
  Section sec2 = sec;
  for (double& u : sec2.u) u *= lambda;
  for (Norm norm : {Norm::L1, Norm::L2}) {
    EXPECT_NEAR(relative_error(sec, sol, norm), relative_error(sec2, scaled, norm), 1e-14);
  }
}

TEST(RelativeError, ShiftedFrontAgainstQuadrature) {
  const auto sol = analytic::barenblatt(6);
  const Mesh mesh = build_mesh({MeshStrategy::D4, 4000, 4000, 3});
  const double s_an = sol.interface(0);
  Section sec;
  sec.t = 0.0;
  sec.s = 1.01 * s_an;
  sec.y = mesh.points();
  for (double y : sec.y) sec.u.push_back(sol.eval(s_an * y, 0.0));
  auto un = [&](double x) { return sol.eval(x / 1.01, 0.0); };
  auto ua = [&](double x) { return sol.eval(x, 0.0); };
  for (auto [norm, k] : {std::pair{Norm::L1, 1.0}, std::pair{Norm::L2, 2.0}}) {
    const double oracle = fine_quadrature(un, ua, sec.s, k);
    const double got = relative_error(sec, sol, norm);
    EXPECT_NEAR(got, oracle, 0.01 * oracle) << "k=" << k;
  }
}

TEST(RelativeError, OwnGridAgreesWithQuadrature) {
  const auto sol = analytic::turbulent();
  const double t = 1.0;
  auto ua = [&](double x) { return sol.eval(x, t); };
  const double s = sol.interface(t);
  auto un = [&](double x) { return ua(x) * (1.0 + 0.05 * std::cos(x / s)); };
  for (int N : {40, 80}) {
    const Mesh mesh = build_mesh({MeshStrategy::D4, N, N, 3});
    Section sec;
    sec.t = t;
    sec.s = s;
    sec.y = mesh.points();
    for (double y : sec.y) sec.u.push_back(un(s * y));
    for (auto [norm, k] : {std::pair{Norm::L1, 1.0}, std::pair{Norm::L2, 2.0}}) {
      const double oracle = fine_quadrature(un, ua, s, k);
      EXPECT_NEAR(relative_error(sec, sol, norm), oracle, 0.05 * oracle) << N;
    }
  }
}

TEST(RelativeError, NumericalSupportBeyondTheFront) {
  const auto sol = analytic::barenblatt(6);
  Section sec;
  sec.t = 0.0;
  sec.s = 0.5 * sol.interface(0);
  sec.y = {0.0, 0.25, 0.5, 0.75, 1.0};
  sec.u = {0.0, 0.0, 0.0, 0.0, 0.0};
  EXPECT_NEAR(relative_error(sec, sol, Norm::L2), 1.0, 1e-15);
}

TEST(RelativeError, DegenerateDenominator) {
  const analytic::KersnerParams k;
  const auto sol = analytic::kersner(k);
  Section sec;
  sec.t = 2.0 * analytic::kersner_extinction_time(k);
  sec.s = 0.1;
  sec.y = {0.0, 0.5, 1.0};
  sec.u = {0.1, 0.05, 0.0};
  try {
    relative_error(sec, sol, Norm::L2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDenominator);
  }
}

TEST(AverageError, Examples) {
  const std::vector<double> c(7, 3e-4);
  EXPECT_DOUBLE_EQ(average_error(c), 3e-4);
  const std::vector<double> two{0.0, 2e-4};
  EXPECT_DOUBLE_EQ(average_error(two), 1e-4);
  EXPECT_THROW(average_error(std::vector<double>{}), Error);
}

TEST(ErrorReport, CsvLayout) {
  const auto sol = analytic::barenblatt(6);
  const Mesh mesh = build_mesh({MeshStrategy::D4, 20, 10, 3});
  std::vector<Section> sections;
  for (int j = 1; j <= 3; ++j) sections.push_back(exact_section(sol, mesh, j * 10.0, 1.0 + 0.01 * j));
  const auto report = error_report(sections, sol);
  EXPECT_EQ(report.r, 3);
  EXPECT_NEAR(report.al, 0.02, 1e-13);
  std::ostringstream os;
  write_error_csv(report, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,l1_rel,l2_rel");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(last.rfind("AL,", 0), 0u);
  EXPECT_NEAR(std::stod(last.substr(3)), 0.02, 1e-13);
}
