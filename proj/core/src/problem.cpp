#include "frontline/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontline/error.hpp"

namespace frontline {

namespace {

constexpr double kExponentEps = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) raise(ErrorCode::InvalidSpec, std::string(name) + " must be finite");
}

}  // namespace

std::string to_string(Branch branch) {
  switch (branch) {
    case Branch::ReactionBalanced: return "reaction-balanced";
    case Branch::DiffusionDominated: return "diffusion-dominated";
    case Branch::NoReaction: return "no-reaction";
  }
  return "unknown";
}

double convection_switch(double gamma) noexcept { return std::abs(gamma - 1.0) <= kExponentEps ? 1.0 : 0.0; }

TransformInfo validate_power_law(const PowerLawParams& p) {
  require_finite(p.n, "n");
  require_finite(p.m, "m");
  require_finite(p.gamma, "gamma");
  require_finite(p.b0, "b0");
  require_finite(p.c0, "c0");
  if (p.n <= 1.0) raise(ErrorCode::DegenerationRequired, "n = " + fmt(p.n) + " must exceed 1");
  if (p.b0 != 0.0 && p.gamma < 1.0) {
    raise(ErrorCode::ConvectionExponentOutOfRange, "gamma = " + fmt(p.gamma) + " must be at least 1");
  }
  if (p.c0 != 0.0 && (p.m < 0.0 || p.m >= 1.0)) {
    raise(ErrorCode::ReactionExponentOutOfRange, "m = " + fmt(p.m) + " must lie in [0, 1)");
  }
  if (p.b0 != 0.0 && p.c0 < 0.0 && std::min(p.n, p.gamma) <= std::min(p.m, 1.0)) {
    raise(ErrorCode::InterfaceNonexistent, "min(n, gamma) = " + fmt(std::min(p.n, p.gamma)) +
                                               " must exceed min(m, 1) = " + fmt(std::min(p.m, 1.0)));
  }
  for (const auto& term : p.extra_reactions) {
    require_finite(term.coefficient, "reaction coefficient");
    require_finite(term.exponent, "reaction exponent");
    if (term.exponent < 0.0 || term.exponent + p.n <= 2.0 + kExponentEps) {
      raise(ErrorCode::ReactionExponentOutOfRange,
            "extra reaction exponent " + fmt(term.exponent) + " must satisfy m_k + n > 2");
    }
  }

  TransformInfo info;
  info.exponent = 1.0 / (p.n - 1.0);
  if (p.c0 == 0.0) {
    info.branch = Branch::NoReaction;
  } else if (std::abs(p.m + p.n - 2.0) <= kExponentEps) {
    info.branch = Branch::ReactionBalanced;
  } else if (p.m + p.n > 2.0) {
    info.branch = Branch::DiffusionDominated;
  } else if (p.c0 < 0.0) {
    raise(ErrorCode::ReactionExponentOutOfRange,
          "m + n = " + fmt(p.m + p.n) + " < 2 with absorption has no supported interface law");
  } else {
    raise(ErrorCode::InterfaceNonexistent, "m + n = " + fmt(p.m + p.n) + " < 2 with a source term");
  }
  return info;
}

TransformInfo validate_contaminant(const ContaminantParams& p) {
  for (double v : {p.D, p.v, p.rho, p.a, p.b, p.p}) require_finite(v, "contaminant parameter");
  if (p.p == 1.0) raise(ErrorCode::SingularIsotherm, "p = 1 gives a nondegenerate isotherm without interface");
  if (p.p <= 0.0 || p.p > 1.0) raise(ErrorCode::InvalidSpec, "isotherm exponent p must lie in (0, 1)");
  if (p.D <= 0.0) raise(ErrorCode::InvalidSpec, "D must be positive");
  if (p.rho <= 0.0 || p.a <= 0.0) raise(ErrorCode::InvalidSpec, "rho and a must be positive");
  if (p.b < 0.0) raise(ErrorCode::InvalidSpec, "b must be nonnegative");
  return {1.0 / (1.0 - p.p), Branch::NoReaction};
}

TransformInfo validate_oxygen(const OxygenParams& p) {
  require_finite(p.m, "m");
  if (p.m < 0.0 || p.m >= 1.0) raise(ErrorCode::ReactionExponentOutOfRange, "m = " + fmt(p.m) + " must lie in [0, 1)");
  if (!p.a0 || !p.b0 || !p.c0 || !p.da0_dx || !p.dc0_dx) {
    raise(ErrorCode::InvalidSpec, "oxygen model needs a0, b0, c0, da0/dx and dc0/dx");
  }
  if (!(p.delta > 0.0)) raise(ErrorCode::InvalidSpec, "delta must be positive");
  return {2.0 / (1.0 - p.m), Branch::ReactionBalanced};
}

TransformInfo validate(const ProblemSpec& spec) {
  TransformInfo info = std::visit(
      [](const auto& model) -> TransformInfo {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, PowerLawParams>) {
          return validate_power_law(model);
        } else if constexpr (std::is_same_v<T, GeneralizedParams>) {
          const auto& c = model.coefficients;
          if (!c.g || !c.b0 || !c.c0) raise(ErrorCode::InvalidSpec, "generalized model needs g, b0 and c0");
          if (!std::isfinite(c.p0) || c.p0 == 0.0) raise(ErrorCode::InvalidSpec, "p0 must be finite and nonzero");
          return validate_power_law(model.exponents);
        } else if constexpr (std::is_same_v<T, OxygenParams>) {
          return validate_oxygen(model);
        } else if constexpr (std::is_same_v<T, ContaminantParams>) {
          return validate_contaminant(model);
        } else {
          require_finite(model.n, "n");
          if (model.n <= 1.0) raise(ErrorCode::DegenerationRequired, "n = " + fmt(model.n) + " must exceed 1");
          if (!(model.length > 0.0)) raise(ErrorCode::InvalidSpec, "classical domain length must be positive");
          return {1.0, Branch::NoReaction};
        }
      },
      spec.model);

  const auto& bc = spec.boundary;
  if (bc.kind != BoundaryKind::Symmetry && !bc.data) {
    raise(ErrorCode::InvalidSpec, "boundary condition needs a data function");
  }
  if (bc.kind == BoundaryKind::Dirichlet && !(bc.data(0.0) >= 0.0)) {
    raise(ErrorCode::InvalidSpec, "Dirichlet data must be nonnegative");
  }
  const bool flux_capable = std::holds_alternative<PowerLawParams>(spec.model) ||
                            std::holds_alternative<GeneralizedParams>(spec.model);
  if (bc.kind == BoundaryKind::Flux && !flux_capable) {
    raise(ErrorCode::InvalidSpec, "flux boundary data is supported for the power-law families only");
  }
  if (std::holds_alternative<ClassicalParams>(spec.model) && bc.kind != BoundaryKind::Symmetry) {
    raise(ErrorCode::InvalidSpec, "the classical baseline uses the symmetry condition at x = 0");
  }
  if (!(spec.initial.L0 > 0.0) && !(spec.initial.aux_support > 0.0)) {
    raise(ErrorCode::EmptySupport, "initial support L0 = " + fmt(spec.initial.L0) + " and no auxiliary support");
  }
  return info;
}

RegularizedProfile regularize_initial_profile(const InitialProfile& profile, double floor, const Mesh& mesh,
                                              const TransformInfo& transform) {
  if (floor < 0.0 || !std::isfinite(floor)) raise(ErrorCode::InvalidSpec, "regularization floor must be >= 0");
  RegularizedProfile out;
  if (profile.L0 > 0.0) {
    out.s0 = profile.L0;
  } else if (profile.aux_support > 0.0) {
    out.s0 = profile.aux_support;
  } else {
    raise(ErrorCode::EmptySupport, "initial support L0 = " + fmt(profile.L0) + " and no auxiliary support");
  }
  const double beta = transform.exponent;
  const auto& y = mesh.points();
  out.w.assign(y.size(), 0.0);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    double u = profile.u0 ? profile.u0(out.s0 * y[i]) : 0.0;
    if (!std::isfinite(u)) raise(ErrorCode::InvalidSpec, "initial profile is not finite at x = " + fmt(out.s0 * y[i]));
    u = std::max(u, 0.0);
    const double tent = floor * std::pow(1.0 - y[i], beta);
    out.w[i] = std::pow(std::max(u, tent), 1.0 / beta);
  }
  out.w.back() = 0.0;
  return out;
}

}  // namespace frontline
