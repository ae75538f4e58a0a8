#include "frontline/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "frontline/error.hpp"

namespace frontline {

namespace {

double interpolate(const std::vector<double>& y, const std::vector<double>& u, double at) {
  if (at >= y.back()) return at == y.back() ? u.back() : 0.0;
  if (at <= y.front()) return u.front();
  const auto it = std::upper_bound(y.begin(), y.end(), at);
  const auto k = static_cast<std::size_t>(it - y.begin());
  const double lam = (at - y[k - 1]) / (y[k] - y[k - 1]);
  return (1.0 - lam) * u[k - 1] + lam * u[k];
}

}  // namespace

double relative_error(const Section& section, const analytic::Solution& solution, Norm norm) {
  const auto& y = section.y;
  if (y.size() < 2 || y.size() != section.u.size()) raise(ErrorCode::MeshIncompatible, "malformed section");
  if (!(section.s > 0.0)) raise(ErrorCode::DegenerateDenominator, "section has an empty support");
  const double s_an = solution.interface(section.t);
  const double s_star = std::max(section.s, s_an);
  const double k = norm == Norm::L1 ? 1.0 : 2.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double x = s_star * y[i];
    const double un = interpolate(y, section.u, x / section.s);
    const double ua = solution.eval(x, section.t);
    const double w = (y[i] - y[i - 1]) * s_star;
    num += std::pow(std::abs(un - ua), k) * w;
    den += std::pow(std::abs(ua), k) * w;
  }
  if (!(den > 0.0)) raise(ErrorCode::DegenerateDenominator, "analytic solution vanishes on the sample");
  return std::pow(num, 1.0 / k) / std::pow(den, 1.0 / k);
}

double average_error(std::span<const double> series) {
  if (series.empty()) raise(ErrorCode::InvalidSpec, "average over an empty series");
  return std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
}

ErrorReport error_report(std::span<const Section> sections, const analytic::Solution& solution) {
  ErrorReport report;
  for (const auto& sec : sections) {
    report.times.push_back(sec.t);
    report.l1.push_back(relative_error(sec, solution, Norm::L1));
    report.l2.push_back(relative_error(sec, solution, Norm::L2));
  }
  report.r = static_cast<int>(report.l2.size());
  report.al = average_error(report.l2);
  return report;
}

void write_error_csv(const ErrorReport& report, std::ostream& out) {
  out << std::setprecision(17) << "t,l1_rel,l2_rel\n";
  for (std::size_t j = 0; j < report.times.size(); ++j) {
    out << report.times[j] << ',' << report.l1[j] << ',' << report.l2[j] << '\n';
  }
  out << "AL," << report.al << '\n';
}

}  // namespace frontline
