#include "frontline/analytic.hpp"

#include <cmath>
#include <sstream>

#include "frontline/error.hpp"

namespace frontline::analytic {

namespace {

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) raise(ErrorCode::ConfigError, "oracle parameter '" + item + "' needs key=value");
    try {
      std::size_t used = 0;
      const std::string value = item.substr(eq + 1);
      out[item.substr(0, eq)] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      raise(ErrorCode::ConfigError, "oracle parameter '" + item + "' is not numeric");
    }
  }
  return out;
}

// Kersner bracket: u^{p-1} a^{1} = A a^{2/(p+1)} - B a^2 - x^2.
struct KersnerShape {
  double A;
  double B;
  double rate;
  double offset;
  double qr;

  explicit KersnerShape(const KersnerParams& k) {
    const double p = k.p;
    rate = 2.0 * p * (p + 1.0) / (p - 1.0);
    offset = (p - 1.0) * k.alpha;
    qr = 1.0 / (p - 1.0);
    A = (k.C0 * std::pow(p - 1.0, 4) * k.alpha * k.alpha + 4.0 * p * p * k.L0 * k.L0) /
        (4.0 * p * p * std::pow(offset, 2.0 / (p + 1.0)));
    B = k.C0 * (p - 1.0) * (p - 1.0) / (4.0 * p * p);
  }

  double a(double t) const { return rate * t + offset; }
  double radius_sq(double t, double p) const {
    const double at = a(t);
    return A * std::pow(at, 2.0 / (p + 1.0)) - B * at * at;
  }
};

void check_kersner(const KersnerParams& k) {
  if (!(k.p > 1.0 && k.p < 2.0) || !(k.C0 > 0.0) || !(k.alpha > 0.0) || !(k.L0 > 0.0)) {
    raise(ErrorCode::InvalidSpec, "kersner needs 1 < p < 2 and positive C0, alpha, L0");
  }
}

}  // namespace

double barenblatt_front(double n, double t) {
  return std::pow(2.0 * n * (n + 1.0) / (n - 1.0) * (t + 1.0), 1.0 / (n + 1.0));
}

Solution barenblatt(double n) {
  if (!(n > 1.0)) raise(ErrorCode::DegenerationRequired, "barenblatt needs n > 1");
  Solution sol;
  sol.name = "barenblatt";
  sol.params = {{"n", n}};
  sol.interface = [n](double t) { return barenblatt_front(n, t); };
  sol.eval = [n](double x, double t) {
    const double s = barenblatt_front(n, t);
    const double r = x / s;
    const double inner = 1.0 - r * r;
    if (!(inner > 0.0)) return 0.0;
    return std::pow(inner, 1.0 / (n - 1.0)) / s;
  };
  return sol;
}

Solution kersner(const KersnerParams& k) {
  check_kersner(k);
  const KersnerShape shape(k);
  const double p = k.p;
  Solution sol;
  sol.name = "kersner";
  sol.params = {{"p", k.p}, {"C0", k.C0}, {"alpha", k.alpha}, {"L0", k.L0}};
  sol.interface = [shape, p](double t) {
    const double r2 = shape.radius_sq(t, p);
    return r2 > 0.0 ? std::sqrt(r2) : 0.0;
  };
  sol.eval = [shape, p](double x, double t) {
    const double bracket = shape.radius_sq(t, p) - x * x;
    if (!(bracket > 0.0)) return 0.0;
    return std::pow(shape.a(t), -shape.qr) * std::pow(bracket, shape.qr);
  };
  return sol;
}

// radius_sq = a^{2/(p+1)} (A - B a^{2p/(p+1)}) vanishes at a* = (A/B)^{(p+1)/(2p)}.
double kersner_extinction_time(const KersnerParams& k) {
  check_kersner(k);
  const KersnerShape shape(k);
  const double a_star = std::pow(shape.A / shape.B, (k.p + 1.0) / (2.0 * k.p));
  return (a_star - shape.offset) / shape.rate;
}

// d/da radius_sq = 0: (2/(p+1)) A a^{2/(p+1)-1} = 2 B a.
double kersner_peak_time(const KersnerParams& k) {
  check_kersner(k);
  const KersnerShape shape(k);
  const double a_peak = std::pow(shape.A / (shape.B * (k.p + 1.0)), (k.p + 1.0) / (2.0 * k.p));
  return std::max(0.0, (a_peak - shape.offset) / shape.rate);
}

double turbulent_a(double t) {
  const double r = 1.0 + std::sqrt(2.0);
  return 2.0 * r * std::exp(-5.0 * t / 6.0) / (r * r - std::exp(-5.0 * t / 3.0));
}

Solution turbulent() {
  Solution sol;
  sol.name = "turbulent";
  sol.interface = [](double t) {
    const double a = turbulent_a(t);
    return 3.0 * std::log(std::sqrt(1.0 / (a * a) + 1.0) + 1.0 / a);
  };
  sol.eval = [](double x, double t) {
    const double a = turbulent_a(t);
    const double inner = 1.0 - std::cosh(x / 3.0) / std::sqrt(1.0 / (a * a) + 1.0);
    if (!(inner > 0.0)) return 0.0;
    return (a * a + 1.0) * inner * inner;
  };
  return sol;
}

Solution by_name(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto params = parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1));
  auto get = [&](const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  auto check_keys = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) raise(ErrorCode::ConfigError, "unknown parameter '" + key + "' for oracle " + name);
    }
  };
  if (name == "barenblatt") {
    check_keys({"n"});
    return barenblatt(get("n", 6.0));
  }
  if (name == "kersner") {
    check_keys({"p", "C0", "alpha", "L0"});
    return kersner({get("p", 1.8), get("C0", 1.0), get("alpha", 1.0), get("L0", 1.0)});
  }
  if (name == "turbulent") {
    check_keys({});
    return turbulent();
  }
  raise(ErrorCode::ConfigError, "unknown oracle '" + name + "'");
}

}  // namespace frontline::analytic
