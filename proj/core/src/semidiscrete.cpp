#include "frontline/semidiscrete.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontline/error.hpp"

namespace frontline {

namespace {

double clamp0(double v) { return v > 0.0 ? v : 0.0; }

// c^e with the convention 0^0 = 1 and a clamped base.
double cpow(double c, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return clamp0(c);
  return std::pow(clamp0(c), e);
}

void check_node(double value, int node, double t) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "derivative at node " << node << " is not finite at t = " << t;
    raise(ErrorCode::NonfiniteRhs, os.str());
  }
}

void check_front(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    std::ostringstream os;
    os << "front position s = " << s << " is not positive";
    raise(ErrorCode::NonfiniteRhs, os.str());
  }
}

double dirichlet_w(const RhsContext& ctx, double t) {
  const double phi = ctx.problem.boundary.data(t);
  if (!(phi >= 0.0)) raise(ErrorCode::InvalidSpec, "Dirichlet data must be nonnegative");
  const double target = std::pow(phi, 1.0 / ctx.transform.exponent);
  const double window = ctx.guards.compatibility_window;
  if (window > 0.0 && t < ctx.t0 + window && target != ctx.initial_boundary_w) {
    const double tau = std::clamp((t - ctx.t0) / window, 0.0, 1.0);
    const double sigma = tau * tau * (3.0 - 2.0 * tau);
    return ctx.initial_boundary_w + (target - ctx.initial_boundary_w) * sigma;
  }
  return target;
}

// w at y_0..y_N from the unknowns.
std::vector<double> full_profile(const State& state, double t, const RhsContext& ctx) {
  const int n_int = ctx.mesh.intervals();
  const int first = first_node(ctx);
  if (static_cast<int>(state.C.size()) != n_int - first) {
    raise(ErrorCode::MeshIncompatible, "state size does not match the mesh");
  }
  std::vector<double> w(static_cast<std::size_t>(n_int) + 1, 0.0);
  if (first == 1) w[0] = dirichlet_w(ctx, t);
  std::copy(state.C.begin(), state.C.end(), w.begin() + first);
  return w;
}

struct NodeDerivs {
  double wy = 0.0;
  double wyy = 0.0;
};

NodeDerivs derivs(const Mesh& mesh, const std::vector<double>& w, int i, double ghost) {
  const auto& st = mesh.stencil(i);
  const double wl = i == 0 ? ghost : w[static_cast<std::size_t>(i - 1)];
  const double wc = w[static_cast<std::size_t>(i)];
  const double wr = w[static_cast<std::size_t>(i + 1)];
  return {st.first[0] * wl + st.first[1] * wc + st.first[2] * wr,
          st.second[0] * wl + st.second[1] * wc + st.second[2] * wr};
}

double front_slope_y(const Mesh& mesh, const std::vector<double>& w) {
  const int n = mesh.intervals();
  const auto& sl = mesh.boundary_slope_weights();
  return sl[0] * w[static_cast<std::size_t>(n - 2)] + sl[1] * w[static_cast<std::size_t>(n - 1)];
}

double front_curvature_y(const Mesh& mesh, const std::vector<double>& w) {
  const int n = mesh.intervals();
  const auto& cv = mesh.boundary_curvature_weights();
  return cv[0] * w[static_cast<std::size_t>(n - 3)] + cv[1] * w[static_cast<std::size_t>(n - 2)] +
         cv[2] * w[static_cast<std::size_t>(n - 1)];
}

double central_dx(const FieldFunction& f, double x, double t) {
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (f(x + h, t) - f(x - h, t)) / (2.0 * h);
}

double field_or_zero(const FieldFunction& f, double x, double t) { return f ? f(x, t) : 0.0; }

double front_speed(const State& state, double t, const RhsContext& ctx, const std::vector<double>& w) {
  const Mesh& mesh = ctx.mesh;
  const double s = state.s;
  BoundarySlopeSample sample{front_slope_y(mesh, w) / s, 0.0, s, t};
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, PowerLawParams>) {
          return speed_power_law(sample, model, ctx.transform, ctx.guards.slope_guard);
        } else if constexpr (std::is_same_v<T, GeneralizedParams>) {
          return speed_generalized(sample, model.coefficients, model.exponents, ctx.guards.slope_guard);
        } else if constexpr (std::is_same_v<T, OxygenParams>) {
          sample.d2w_dx2 = front_curvature_y(mesh, w) / (s * s);
          return speed_oxygen(sample, model);
        } else if constexpr (std::is_same_v<T, ContaminantParams>) {
          return speed_contaminant(sample, model);
        } else {
          return 0.0;
        }
      },
      ctx.problem.model);
}

}  // namespace

int first_node(const RhsContext& ctx) { return ctx.problem.boundary.kind == BoundaryKind::Dirichlet ? 1 : 0; }

double ghost_value(double C1, double C0, double s, double q, const PowerLawParams& params, double beta,
                   double alpha1) {
  const double c0 = clamp0(C0);
  const double numerator = q - params.b0 * cpow(c0, params.gamma * beta);
  if (numerator == 0.0) return C1;
  const double exponent = params.n * beta - 1.0;
  if (c0 == 0.0 && exponent > 0.0) {
    raise(ErrorCode::BoundaryDegenerate, "flux condition at x = 0 with C_0 = 0 has no ghost value");
  }
  return C1 + s * numerator * 2.0 * alpha1 / (params.n * beta * cpow(c0, exponent));
}

State rhs_power_law(const State& state, double t, const RhsContext& ctx) {
  const PowerLawParams* params = nullptr;
  const GeneralizedCoefficients* coeffs = nullptr;
  if (const auto* p = std::get_if<PowerLawParams>(&ctx.problem.model)) {
    params = p;
  } else if (const auto* g = std::get_if<GeneralizedParams>(&ctx.problem.model)) {
    params = &g->exponents;
    coeffs = &g->coefficients;
  } else {
    raise(ErrorCode::InvalidSpec, "rhs_power_law needs a power-law or generalized model");
  }
  check_front(state.s);
  const Mesh& mesh = ctx.mesh;
  const int n_int = mesh.intervals();
  const int first = first_node(ctx);
  const std::vector<double> w = full_profile(state, t, ctx);
  const double s = state.s;
  const double Q = front_speed(state, t, ctx, w);

  const double n = params->n;
  const double beta = ctx.transform.exponent;
  const double gamma = params->gamma;
  // beta = 1/(n-1) makes the diffusion exponents exactly 1 and 0.
  const double diffusion_square = n / (n - 1.0);
  const double convection_exp = gamma == 1.0 ? 0.0 : (gamma - 1.0) * beta;
  const double reaction_exp =
      ctx.transform.branch == Branch::ReactionBalanced ? 0.0 : (params->m + n - 2.0) / (n - 1.0);
  const double g = coeffs ? coeffs->g(t) : 1.0;

  double ghost = 0.0;
  if (first == 0) {
    const auto& bc = ctx.problem.boundary;
    if (bc.kind == BoundaryKind::Flux) {
      PowerLawParams at_origin = *params;
      if (coeffs) at_origin.b0 = coeffs->b0(0.0, t);
      ghost = ghost_value(w[1], w[0], s, bc.data(t), at_origin, beta, mesh.spacing(1));
    } else {
      ghost = w[1];
    }
  }

  State out;
  out.C.resize(state.C.size());
  out.s = Q;
  for (int i = first; i < n_int; ++i) {
    const double yi = mesh.point(i);
    const double x = s * yi;
    const double c = w[static_cast<std::size_t>(i)];
    const auto [wy, wyy] = derivs(mesh, w, i, ghost);
    double b0 = params->b0;
    double c0 = params->c0;
    if (coeffs) {
      b0 = coeffs->b0(x, t);
      c0 = coeffs->c0(x, t) * coeffs->p0;
    }
    double v = g * (n * clamp0(c) * wyy + diffusion_square * wy * wy) / (s * s);
    if (b0 != 0.0) v += b0 * gamma * cpow(c, convection_exp) * wy / s;
    if (c0 != 0.0) v += c0 / beta * cpow(c, reaction_exp);
    for (const auto& term : params->extra_reactions) {
      v += term.coefficient / beta * cpow(c, (term.exponent + n - 2.0) / (n - 1.0));
    }
    if (coeffs) {
      const double db0 = coeffs->db0_dx ? coeffs->db0_dx(x, t) : central_dx(coeffs->b0, x, t);
      if (db0 != 0.0) v += db0 / beta * cpow(c, convection_exp + 1.0);
    }
    v += yi * Q / s * wy;
    check_node(v, i, t);
    out.C[static_cast<std::size_t>(i - first)] = v;
  }
  return out;
}

State rhs_oxygen(const State& state, double t, const RhsContext& ctx) {
  const auto* params = std::get_if<OxygenParams>(&ctx.problem.model);
  if (!params) raise(ErrorCode::InvalidSpec, "rhs_oxygen needs an oxygen model");
  check_front(state.s);
  const Mesh& mesh = ctx.mesh;
  const int n_int = mesh.intervals();
  const int first = first_node(ctx);
  const std::vector<double> w = full_profile(state, t, ctx);
  const double s = state.s;
  const double alpha = ctx.transform.exponent;

  State out;
  out.C.resize(state.C.size());
  // w == 0 everywhere: nothing to transport, only the front law remains.
  const bool vanished = std::all_of(state.C.begin(), state.C.end(), [](double c) { return c == 0.0; });
  const double Q = front_speed(state, t, ctx, w);
  out.s = Q;
  if (vanished) return out;

  const double ghost = w[1];
  for (int i = first; i < n_int; ++i) {
    const double yi = mesh.point(i);
    const double x = s * yi;
    const double c = w[static_cast<std::size_t>(i)];
    if (!(c > 0.0)) {
      std::ostringstream os;
      os << "w = " << c << " <= 0 at interior node " << i;
      raise(ErrorCode::NonfiniteRhs, os.str());
    }
    const auto [wy, wyy] = derivs(mesh, w, i, ghost);
    const double wx = wy / s;
    const double wxx = wyy / (s * s);
    const double a0 = params->a0(x, t);
    const double b0 = params->b0(x, t);
    const double c0 = params->c0(x, t);
    const double da0 = params->da0_dx(x, t);
    const double lower = field_or_zero(params->d2a0_dx2, x, t) + field_or_zero(params->db0_dx, x, t);
    // (m-1) alpha + 1 = -1
    double v = a0 * (wxx + (alpha - 1.0) * wx * wx / c) + (b0 + 2.0 * da0) * wx + c0 / (alpha * c) +
               lower / alpha * c;
    v += yi * Q / s * wy;
    check_node(v, i, t);
    out.C[static_cast<std::size_t>(i - first)] = v;
  }
  return out;
}

State rhs_contaminant(const State& state, double t, const RhsContext& ctx) {
  const auto* params = std::get_if<ContaminantParams>(&ctx.problem.model);
  if (!params) raise(ErrorCode::InvalidSpec, "rhs_contaminant needs a contaminant model");
  check_front(state.s);
  const Mesh& mesh = ctx.mesh;
  const int n_int = mesh.intervals();
  const int first = first_node(ctx);
  const std::vector<double> w = full_profile(state, t, ctx);
  const double s = state.s;
  const double beta = ctx.transform.exponent;
  const double Q = front_speed(state, t, ctx, w);
  const auto& p = *params;

  State out;
  out.C.resize(state.C.size());
  out.s = Q;
  const double ghost = w[1];
  for (int i = first; i < n_int; ++i) {
    const double yi = mesh.point(i);
    const double c = clamp0(w[static_cast<std::size_t>(i)]);
    const auto [wy, wyy] = derivs(mesh, w, i, ghost);
    const double wx = wy / s;
    const double wxx = wyy / (s * s);
    const double iso = 1.0 + p.b * cpow(c, beta * p.p);
    const double denom = c + p.rho * p.a * p.p / (iso * iso);
    double v = (p.D * (beta - 1.0) * wx * wx + p.D * c * wxx - p.v * c * wx) / denom;
    v += yi * Q / s * wy;
    check_node(v, i, t);
    out.C[static_cast<std::size_t>(i - first)] = v;
  }
  return out;
}

std::vector<double> rhs_classical(std::span<const double> u, double t, std::span<const double> x, double p) {
  if (u.size() != x.size() || u.size() < 3) raise(ErrorCode::MeshIncompatible, "classical grid and state differ");
  const std::size_t last = u.size() - 1;
  std::vector<double> out(u.size(), 0.0);
  std::vector<double> up(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) up[i] = i == last ? 0.0 : cpow(u[i], p);
  const double a1 = x[1] - x[0];
  out[0] = 2.0 * p / (a1 * a1) * (u[1] - u[0]) * cpow(u[0], p - 1.0);
  check_node(out[0], 0, t);
  for (std::size_t i = 1; i < last; ++i) {
    const double a = x[i] - x[i - 1];
    const double b = x[i + 1] - x[i];
    out[i] = 2.0 / ((a + b) * a * b) * (b * up[i - 1] + a * up[i + 1] - (a + b) * up[i]);
    check_node(out[i], static_cast<int>(i), t);
  }
  return out;
}

Extinction extinction_check(const State& state, const Guards& guards) {
  const double peak = state.C.empty() ? 0.0 : *std::max_element(state.C.begin(), state.C.end());
  if (peak < guards.extinction_floor || state.s < guards.s_min) return Extinction::Extinct;
  return Extinction::Continue;
}

SemidiscreteSystem::SemidiscreteSystem(RhsContext ctx) : ctx_(std::move(ctx)) {
  tracks_ = !std::holds_alternative<ClassicalParams>(ctx_.problem.model);
  first_ = frontline::first_node(ctx_);
  if (ctx_.mesh.intervals() < 4) raise(ErrorCode::MeshIncompatible, "need at least 4 intervals");
}

int SemidiscreteSystem::size() const noexcept {
  return ctx_.mesh.intervals() - first_ + (tracks_ ? 1 : 0);
}

State SemidiscreteSystem::unpack(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != size()) raise(ErrorCode::MeshIncompatible, "flat state has the wrong size");
  State st;
  const std::size_t nodes = static_cast<std::size_t>(ctx_.mesh.intervals() - first_);
  st.C.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(nodes));
  if (tracks_) {
    st.s = y[nodes];
  } else {
    st.s = std::get<ClassicalParams>(ctx_.problem.model).length;
  }
  return st;
}

std::vector<double> SemidiscreteSystem::pack(const State& state) const {
  std::vector<double> y(state.C);
  if (tracks_) y.push_back(state.s);
  if (static_cast<int>(y.size()) != size()) raise(ErrorCode::MeshIncompatible, "state has the wrong size");
  return y;
}

State SemidiscreteSystem::initial_state(std::span<const double> w, double s0) const {
  if (static_cast<int>(w.size()) != ctx_.mesh.intervals() + 1) {
    raise(ErrorCode::MeshIncompatible, "initial profile size does not match the mesh");
  }
  State st;
  st.C.assign(w.begin() + first_, w.end() - 1);
  st.s = tracks_ ? s0 : std::get<ClassicalParams>(ctx_.problem.model).length;
  return st;
}

double SemidiscreteSystem::boundary_value(double t) const {
  if (first_ != 1) raise(ErrorCode::InvalidSpec, "boundary value requested without a Dirichlet condition");
  return dirichlet_w(ctx_, t);
}

std::vector<double> SemidiscreteSystem::profile(double t, std::span<const double> y) const {
  return full_profile(unpack(y), t, ctx_);
}

double SemidiscreteSystem::interface_speed(double t, std::span<const double> y) const {
  if (!tracks_) return 0.0;
  const State st = unpack(y);
  check_front(st.s);
  return front_speed(st, t, ctx_, full_profile(st, t, ctx_));
}

void SemidiscreteSystem::operator()(double t, std::span<const double> y, std::span<double> dydt) const {
  if (!tracks_) {
    const auto& cp = std::get<ClassicalParams>(ctx_.problem.model);
    std::vector<double> x(ctx_.mesh.points());
    for (double& xi : x) xi *= cp.length;
    std::vector<double> u(y.begin(), y.end());
    u.push_back(0.0);
    const std::vector<double> d = rhs_classical(u, t, x, cp.n);
    std::copy(d.begin(), d.end() - 1, dydt.begin());
    return;
  }
  const State st = unpack(y);
  State d;
  if (std::holds_alternative<OxygenParams>(ctx_.problem.model)) {
    d = rhs_oxygen(st, t, ctx_);
  } else if (std::holds_alternative<ContaminantParams>(ctx_.problem.model)) {
    d = rhs_contaminant(st, t, ctx_);
  } else {
    d = rhs_power_law(st, t, ctx_);
  }
  std::copy(d.C.begin(), d.C.end(), dydt.begin());
  dydt[d.C.size()] = d.s;
}

OdeRhs SemidiscreteSystem::as_rhs() const {
  return [this](double t, std::span<const double> y, std::span<double> dydt) { (*this)(t, y, dydt); };
}

}  // namespace frontline
