#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "frontline/analytic.hpp"

namespace frontline {

enum class Norm { L1, L2 };

/// One time section of a numerical solution: u at x_i = s y_i.
struct Section {
  double t = 0.0;
  double s = 0.0;
  std::vector<double> y;
  std::vector<double> u;
};

/// Relative discrete error over the wider of the two supports:
/// s* = max(s, s_an), samples x_i = s* y_i for i = 1..N, numerical values
/// linearly interpolated in y (0 beyond the numerical front).
double relative_error(const Section& section, const analytic::Solution& solution, Norm norm);

/// Arithmetic mean of the series.
double average_error(std::span<const double> series);

struct ErrorReport {
  std::vector<double> times;
  std::vector<double> l1;
  std::vector<double> l2;
  double al = 0.0;
  int r = 0;
};

ErrorReport error_report(std::span<const Section> sections, const analytic::Solution& solution);

/// "t,l1_rel,l2_rel" rows followed by "AL,<al>".
void write_error_csv(const ErrorReport& report, std::ostream& out);

}  // namespace frontline
