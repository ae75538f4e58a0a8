#pragma once

#include <functional>
#include <map>
#include <string>

namespace frontline::analytic {

/// Closed-form solution on x >= 0 with its front. eval is 0 beyond interface(t).
struct Solution {
  std::string name;
  std::function<double(double x, double t)> eval;
  std::function<double(double t)> interface;
  std::map<std::string, double> params;
};

/// Source solution of u_t = (u^n)_xx: u = (1/s)[1-(x/s)^2]_+^{1/(n-1)},
/// s(t) = [2n(n+1)/(n-1) (t+1)]^{1/(n+1)}.
Solution barenblatt(double n);
double barenblatt_front(double n, double t);

/// u_t = (u^p)_xx - C0 u^{2-p}, 1 < p < 2, with a shrinking-then-vanishing support.
struct KersnerParams {
  double p = 1.8;
  double C0 = 1.0;
  double alpha = 1.0;
  double L0 = 1.0;
};

Solution kersner(const KersnerParams& params);
/// Time at which the support collapses to a point.
double kersner_extinction_time(const KersnerParams& params);
/// Time at which the support radius is largest.
double kersner_peak_time(const KersnerParams& params);

/// u_t = (u^{3/2})_xx - u^{3/2} + u^{1/2}:
/// u = (a^2+1) [(1 - cosh(x/3)/sqrt(a^{-2}+1))_+]^2,
/// a(t) = 2(1+sqrt2) e^{-5t/6} / ((1+sqrt2)^2 - e^{-5t/3}).
Solution turbulent();
double turbulent_a(double t);

/// "barenblatt:n=6", "kersner:p=1.8,C0=1,alpha=1,L0=1", "turbulent".
Solution by_name(const std::string& spec);

}  // namespace frontline::analytic
