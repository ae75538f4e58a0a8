#include "frontline/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

// Boost 1.74's pchip calls isnan unqualified; math.h puts it in the global namespace.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "frontline/analytic.hpp"
#include "frontline/error.hpp"

namespace frontline {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKnownKeys = {
    "problem.model",          "problem.n",
    "problem.m",              "problem.gamma",
    "problem.b0",             "problem.b0.dx",
    "problem.b0.dt",          "problem.c0",
    "problem.c0.dx",          "problem.c0.dt",
    "problem.a0",             "problem.a0.dx",
    "problem.a0.dt",          "problem.g",
    "problem.g.dt",           "problem.p0",
    "problem.reactions",      "problem.delta",
    "problem.D",              "problem.v",
    "problem.rho",            "problem.a",
    "problem.b",              "problem.p",
    "problem.length",         "problem.boundary",
    "problem.boundary.value", "problem.boundary.switch_time",
    "problem.boundary.value_after",
    "problem.initial",        "problem.initial.L0",
    "problem.initial.height", "problem.initial.alpha",
    "problem.initial.aux_support",
    "problem.initial.trace",  "problem.initial.section",
    "problem.floor",          "mesh.strategy",
    "mesh.N",                 "mesh.M",
    "mesh.d",                 "solver.t0",
    "solver.t1",              "solver.rtol",
    "solver.atol",            "solver.max_order",
    "solver.max_step",        "solver.initial_step",
    "solver.fixed_step",      "solver.slope_guard",
    "solver.extinction_floor", "solver.s_min",
    "solver.compatibility_window",
    "output.dir",             "output.sections",
    "output.oracle",          "output.interface",
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FieldFunction affine_field(const Config& c, const std::string& key, double fallback = 0.0) {
  const double base = c.number_or(key, fallback);
  const double dx = c.number_or(key + ".dx", 0.0);
  const double dt = c.number_or(key + ".dt", 0.0);
  return [base, dx, dt](double x, double t) { return base + dx * x + dt * t; };
}

FieldFunction constant_field(double v) {
  return [v](double, double) { return v; };
}

// "-1@1.5; 2@1.2" -> coefficient@exponent terms.
std::vector<ReactionTerm> parse_reactions(const Config& c) {
  std::vector<ReactionTerm> out;
  if (!c.has("problem.reactions")) return out;
  std::stringstream ss(c.string("problem.reactions"));
  std::string item;
  while (std::getline(ss, item, ';')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    const auto at = item.find('@');
    try {
      if (at == std::string::npos) throw std::invalid_argument(item);
      out.push_back({std::stod(item.substr(0, at)), std::stod(item.substr(at + 1))});
    } catch (const std::logic_error&) {
      raise(ErrorCode::ConfigError, c.source() + ": field 'problem.reactions' term '" + item +
                                        "' must read coefficient@exponent");
    }
  }
  return out;
}

PowerLawParams power_law_exponents(const Config& c) {
  PowerLawParams p;
  p.n = c.number("problem.n");
  p.m = c.number_or("problem.m", 0.0);
  p.gamma = c.number_or("problem.gamma", 1.0);
  p.b0 = c.number_or("problem.b0", 0.0);
  p.c0 = c.number_or("problem.c0", 0.0);
  p.extra_reactions = parse_reactions(c);
  return p;
}

// Sign marker for a coefficient field that may vary in x or t.
double sign_marker(const Config& c, const std::string& key) {
  const double base = c.number_or(key, 0.0);
  if (base != 0.0) return base;
  if (c.number_or(key + ".dx", 0.0) != 0.0 || c.number_or(key + ".dt", 0.0) != 0.0) {
    raise(ErrorCode::ConfigError, c.source() + ": field '" + key +
                                      "' must be nonzero when its x or t slope is set (it fixes the sign)");
  }
  return 0.0;
}

ModelParams build_model(const Config& c, const std::string& model) {
  if (model == "power_law") return power_law_exponents(c);
  if (model == "generalized") {
    GeneralizedParams g;
    g.exponents = power_law_exponents(c);
    g.exponents.b0 = sign_marker(c, "problem.b0");
    g.exponents.c0 = sign_marker(c, "problem.c0");
    const double g0 = c.number_or("problem.g", 1.0);
    const double gdt = c.number_or("problem.g.dt", 0.0);
    g.coefficients.g = [g0, gdt](double t) { return g0 + gdt * t; };
    g.coefficients.b0 = affine_field(c, "problem.b0");
    g.coefficients.c0 = affine_field(c, "problem.c0");
    g.coefficients.p0 = c.number_or("problem.p0", 1.0);
    g.coefficients.db0_dx = constant_field(c.number_or("problem.b0.dx", 0.0));
    return g;
  }
  if (model == "oxygen") {
    OxygenParams o;
    c.number("problem.a0");
    c.number("problem.c0");
    o.a0 = affine_field(c, "problem.a0");
    o.b0 = affine_field(c, "problem.b0");
    o.c0 = affine_field(c, "problem.c0");
    o.da0_dx = constant_field(c.number_or("problem.a0.dx", 0.0));
    o.dc0_dx = constant_field(c.number_or("problem.c0.dx", 0.0));
    o.db0_dx = constant_field(c.number_or("problem.b0.dx", 0.0));
    o.m = c.number_or("problem.m", 0.0);
    o.delta = c.number_or("problem.delta", 1e-12);
    return o;
  }
  if (model == "contaminant") {
    ContaminantParams p;
    p.D = c.number("problem.D");
    p.v = c.number_or("problem.v", p.v);
    p.rho = c.number_or("problem.rho", p.rho);
    p.a = c.number_or("problem.a", p.a);
    p.b = c.number_or("problem.b", p.b);
    p.p = c.number("problem.p");
    return p;
  }
  if (model == "classical") {
    ClassicalParams p;
    p.n = c.number("problem.n");
    p.length = c.number_or("problem.length", p.length);
    if (!(p.n > 1.0) || !(p.length > 0.0)) raise(ErrorCode::InvalidSpec, "classical needs n > 1 and length > 0");
    return p;
  }
  raise(ErrorCode::ConfigError, c.source() + ": field 'problem.model' has unknown value '" + model +
                                    "' (power_law, generalized, oxygen, contaminant, classical)");
}

BoundaryCondition build_boundary(const Config& c) {
  const std::string kind = c.string_or("problem.boundary", "symmetry");
  if (kind == "symmetry") return BoundaryCondition::symmetry();
  const double value = c.number("problem.boundary.value");
  const double switch_time = c.number_or("problem.boundary.switch_time", std::numeric_limits<double>::infinity());
  const double after = c.number_or("problem.boundary.value_after", value);
  TimeFunction data = [value, switch_time, after](double t) { return t < switch_time ? value : after; };
  if (kind == "dirichlet") return BoundaryCondition::dirichlet(std::move(data));
  if (kind == "flux") return BoundaryCondition::flux(std::move(data));
  raise(ErrorCode::ConfigError, c.source() + ": field 'problem.boundary' has unknown value '" + kind +
                                    "' (symmetry, dirichlet, flux)");
}

fs::path output_root() {
  const char* env = std::getenv("FRONTLINE_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("runs");
}

fs::path resolve_output(const Config& c) {
  fs::path dir = c.has("output.dir") ? fs::path(c.string("output.dir")) : fs::path(fs::path(c.source()).stem());
  if (dir.empty()) dir = "run";
  return dir.is_absolute() ? dir : output_root() / dir;
}

const TraceSection& pick_section(const std::vector<TraceSection>& trace, int index, const std::string& where) {
  if (trace.empty()) raise(ErrorCode::MeshIncompatible, where + " holds no sections");
  const int k = index < 0 ? static_cast<int>(trace.size()) + index : index;
  if (k < 0 || k >= static_cast<int>(trace.size())) raise(ErrorCode::ConfigError, where + ": section index out of range");
  return trace[static_cast<std::size_t>(k)];
}

void build_initial(const Config& c, ExperimentConfig& cfg) {
  const std::string kind = c.string_or("problem.initial", cfg.model == "classical" ? "barenblatt" : "bump");
  InitialProfile init;
  const double t0 = cfg.t0;
  if (kind == "barenblatt") {
    const double n = c.number("problem.n");
    const auto sol = analytic::barenblatt(n);
    init.u0 = [sol, t0](double x) { return sol.eval(x, t0); };
    init.L0 = sol.interface(t0);
  } else if (kind == "kersner") {
    analytic::KersnerParams k;
    k.p = c.number("problem.n");
    k.C0 = -c.number("problem.c0");
    k.alpha = c.number_or("problem.initial.alpha", 1.0);
    k.L0 = c.number_or("problem.initial.L0", 1.0);
    const auto sol = analytic::kersner(k);
    init.u0 = [sol, t0](double x) { return sol.eval(x, t0); };
    init.L0 = sol.interface(t0);
  } else if (kind == "turbulent") {
    const auto sol = analytic::turbulent();
    init.u0 = [sol, t0](double x) { return sol.eval(x, t0); };
    init.L0 = sol.interface(t0);
  } else if (kind == "bump") {
    const double L0 = c.number("problem.initial.L0");
    const double height = c.number_or("problem.initial.height", 1.0);
    const double e = cfg.transform.exponent;
    init.u0 = [L0, height, e](double x) {
      const double r = 1.0 - (x / L0) * (x / L0);
      return r > 0.0 ? height * std::pow(r, e) : 0.0;
    };
    init.L0 = L0;
  } else if (kind == "zero") {
    init.aux_support = c.number("problem.initial.aux_support");
  } else if (kind == "trace") {
    fs::path path = c.string("problem.initial.trace");
    if (path.is_relative()) path = output_root() / path;
    const auto trace = read_solution_csv(path);
    const auto& donor = pick_section(trace, c.integer_or("problem.initial.section", -1), path.string());
    cfg.initial_w = regrid_restart(donor, experiment_mesh(cfg), cfg.guards.extinction_floor);
    cfg.initial_s = donor.s;
    init.L0 = donor.s;
  } else {
    raise(ErrorCode::ConfigError, c.source() + ": field 'problem.initial' has unknown value '" + kind +
                                      "' (barenblatt, kersner, turbulent, bump, zero, trace)");
  }
  if (cfg.model == "classical") {
    init.L0 = std::get<ClassicalParams>(cfg.problem.model).length;
    init.aux_support = 0.0;
  }
  cfg.problem.initial = std::move(init);
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

}  // namespace

bool is_user_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec:
    case ErrorCode::DegenerationRequired:
    case ErrorCode::ReactionExponentOutOfRange:
    case ErrorCode::ConvectionExponentOutOfRange:
    case ErrorCode::InterfaceNonexistent:
    case ErrorCode::SingularIsotherm:
    case ErrorCode::EmptySupport:
    case ErrorCode::NoGeometricRatio:
    case ErrorCode::MeshIncompatible:
    case ErrorCode::ConfigError:
    case ErrorCode::DegenerateDenominator:
      return true;
    default:
      return false;
  }
}

MeshSpec parse_mesh_spec(const std::string& text) {
  MeshSpec spec;
  const auto colon = text.find(':');
  spec.strategy = parse_mesh_strategy(text.substr(0, colon));
  if (colon == std::string::npos) return spec;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) raise(ErrorCode::ConfigError, "mesh spec item '" + item + "' needs key=value");
    const std::string key = item.substr(0, eq);
    int value = 0;
    try {
      value = std::stoi(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      raise(ErrorCode::ConfigError, "mesh spec item '" + item + "' is not an integer");
    }
    if (key == "N") {
      spec.N = value;
    } else if (key == "M") {
      spec.M = value;
    } else if (key == "d") {
      spec.d = value;
    } else {
      raise(ErrorCode::ConfigError, "unknown mesh spec key '" + key + "'");
    }
  }
  return spec;
}

ExperimentConfig build_experiment(const Config& c) {
  c.check_known(kKnownKeys);
  ExperimentConfig cfg;
  cfg.source = c;
  cfg.model = c.string("problem.model");
  cfg.problem.model = build_model(c, cfg.model);
  cfg.problem.boundary = build_boundary(c);

  cfg.mesh.strategy = parse_mesh_strategy(c.string_or("mesh.strategy", "D4"));
  cfg.mesh.N = c.integer_or("mesh.N", cfg.mesh.N);
  cfg.mesh.M = c.integer_or("mesh.M", cfg.mesh.M);
  cfg.mesh.d = c.integer_or("mesh.d", cfg.mesh.d);

  cfg.t0 = c.number_or("solver.t0", 0.0);
  cfg.t1 = c.number("solver.t1");
  if (!(cfg.t1 > cfg.t0)) raise(ErrorCode::ConfigError, c.source() + ": field 'solver.t1' must exceed solver.t0");
  cfg.tol.rtol = c.number_or("solver.rtol", cfg.tol.rtol);
  cfg.tol.atol = c.number_or("solver.atol", cfg.tol.atol);
  cfg.tol.max_order = c.integer_or("solver.max_order", cfg.tol.max_order);
  cfg.tol.max_step = c.number_or("solver.max_step", cfg.tol.max_step);
  cfg.tol.initial_step = c.number_or("solver.initial_step", 0.0);
  cfg.tol.fixed_step = c.number_or("solver.fixed_step", 0.0);
  cfg.guards.slope_guard = c.number_or("solver.slope_guard", cfg.guards.slope_guard);
  cfg.guards.extinction_floor = c.number_or("solver.extinction_floor", cfg.guards.extinction_floor);
  cfg.guards.s_min = c.number_or("solver.s_min", cfg.guards.s_min);
  if (cfg.problem.boundary.kind == BoundaryKind::Dirichlet) {
    cfg.guards.compatibility_window = c.number_or("solver.compatibility_window", 0.01) * (cfg.t1 - cfg.t0);
  }
  cfg.floor = c.number_or("problem.floor", kDefaultRegularizationFloor);

  cfg.sections = c.integer_or("output.sections", 30);
  if (cfg.sections < 1) raise(ErrorCode::ConfigError, c.source() + ": field 'output.sections' must be at least 1");
  cfg.output_dir = resolve_output(c);
  if (c.has("output.oracle")) cfg.oracle = c.string("output.oracle");
  cfg.write_interface = c.string_or("output.interface", "true") != "false";

  if (std::holds_alternative<ClassicalParams>(cfg.problem.model)) {
    if (cfg.problem.boundary.kind != BoundaryKind::Symmetry) {
      raise(ErrorCode::InvalidSpec, "the classical baseline needs a symmetry boundary");
    }
    cfg.transform = {1.0, Branch::NoReaction};
  } else {
    // Exponent first (the initial profile may depend on it), support checks after.
    ProblemSpec probe = cfg.problem;
    probe.initial.L0 = 1.0;
    cfg.transform = validate(probe);
  }
  build_initial(c, cfg);
  if (!std::holds_alternative<ClassicalParams>(cfg.problem.model)) cfg.transform = validate(cfg.problem);
  if (cfg.oracle) analytic::by_name(*cfg.oracle);
  experiment_mesh(cfg);
  return cfg;
}

Mesh experiment_mesh(const ExperimentConfig& cfg) {
  if (std::holds_alternative<ClassicalParams>(cfg.problem.model)) {
    if (cfg.mesh.N < 4) raise(ErrorCode::ConfigError, "classical grid needs mesh.N >= 4");
    std::vector<double> y(static_cast<std::size_t>(cfg.mesh.N) + 1);
    for (int i = 0; i <= cfg.mesh.N; ++i) y[static_cast<std::size_t>(i)] = static_cast<double>(i) / cfg.mesh.N;
    y.back() = 1.0;
    return Mesh(std::move(y));
  }
  return build_mesh(cfg.mesh);
}

std::vector<double> regrid_restart(const TraceSection& donor, const Mesh& mesh, double extinction_floor) {
  if (donor.y.size() < 4 || donor.y.size() != donor.w.size()) raise(ErrorCode::MeshIncompatible, "malformed donor section");
  const double peak = *std::max_element(donor.w.begin(), donor.w.end());
  if (!(donor.s > 0.0) || peak < extinction_floor) {
    raise(ErrorCode::MeshIncompatible, "donor section at t = " + g17(donor.t) + " is extinct; nothing to restart");
  }
  if (donor.y == mesh.points()) return donor.w;
  std::vector<double> ys(donor.y);
  std::vector<double> ws(donor.w);
  const boost::math::interpolators::pchip<std::vector<double>> interp(std::move(ys), std::move(ws));
  std::vector<double> out;
  out.reserve(mesh.points().size());
  for (double y : mesh.points()) out.push_back(std::max(0.0, interp(y)));
  out.back() = 0.0;
  return out;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::ConfigError, "cannot write " + tmp.string());
    out << contents;
    if (!out) raise(ErrorCode::ConfigError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_solution_csv(const std::vector<TraceSection>& sections, const fs::path& path) {
  std::string out = "section,t,s,i,y,x,w,u\n";
  for (std::size_t j = 0; j < sections.size(); ++j) {
    const auto& sec = sections[j];
    for (std::size_t i = 0; i < sec.y.size(); ++i) {
      const double x = sec.s * sec.y[i];
      out += csv_join({std::to_string(j + 1), g17(sec.t), g17(sec.s), std::to_string(i), g17(sec.y[i]), g17(x),
                       g17(sec.w[i]), g17(sec.u[i])});
      out += '\n';
    }
  }
  write_atomic(path, out);
}

std::vector<TraceSection> read_solution_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ConfigError, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "section,t,s,i,y,x,w,u") raise(ErrorCode::ConfigError, path.string() + ": unexpected header");
  std::vector<TraceSection> out;
  int current = -1;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    try {
      while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    } catch (const std::logic_error&) {
      raise(ErrorCode::ConfigError, path.string() + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
    if (v.size() != 8) raise(ErrorCode::ConfigError, path.string() + ":" + std::to_string(line_no) + ": expected 8 cells");
    const int sec = static_cast<int>(v[0]);
    if (sec != current) {
      out.push_back({v[1], v[2], {}, {}, {}});
      current = sec;
    }
    auto& s = out.back();
    s.y.push_back(v[4]);
    s.w.push_back(v[6]);
    s.u.push_back(v[7]);
  }
  return out;
}

ErrorReport compare_sections(const std::vector<TraceSection>& sections, const analytic::Solution& oracle) {
  std::vector<Section> usable;
  for (const auto& sec : sections) {
    if (oracle.interface(sec.t) > 0.0) usable.push_back(sec.section());
  }
  if (usable.empty()) raise(ErrorCode::DegenerateDenominator, "no section with a nonzero analytic solution");
  return error_report(usable, oracle);
}

RunOutcome run_experiment(const ExperimentConfig& cfg, bool write) {
  const auto started = std::chrono::steady_clock::now();
  const Mesh mesh = experiment_mesh(cfg);
  std::vector<double> w0;
  double s0 = 0.0;
  if (cfg.initial_w) {
    w0 = *cfg.initial_w;
    s0 = cfg.initial_s;
  } else {
    auto reg = regularize_initial_profile(cfg.problem.initial, cfg.floor, mesh, cfg.transform);
    w0 = std::move(reg.w);
    s0 = reg.s0;
  }
  RhsContext ctx{cfg.problem, mesh, cfg.transform, cfg.guards, cfg.t0, w0.front()};
  const SemidiscreteSystem system(ctx);
  const std::vector<double> y0 = system.pack(system.initial_state(w0, s0));
  const double beta = cfg.transform.exponent;

  std::vector<double> times;
  for (int j = 1; j <= cfg.sections; ++j) {
    times.push_back(j == cfg.sections ? cfg.t1 : cfg.t0 + j * (cfg.t1 - cfg.t0) / cfg.sections);
  }

  RunOutcome outcome;
  const bool tracks = system.tracks_interface();
  const double fixed_s = tracks ? 0.0 : std::get<ClassicalParams>(cfg.problem.model).length;
  outcome.interface.push_back({cfg.t0, tracks ? y0.back() : fixed_s});
  long clamp_events = 0;
  const double atol = cfg.tol.atol;
  auto observer = [&](double t, std::span<const double> y) {
    const State st = system.unpack(y);
    if (std::any_of(st.C.begin(), st.C.end(), [atol](double c) { return c < -atol; })) ++clamp_events;
    outcome.interface.push_back({t, st.s});
    return tracks && extinction_check(st, cfg.guards) == Extinction::Extinct;
  };
  const auto result = integrate(system.as_rhs(), y0, cfg.t0, cfg.t1, times, cfg.tol, observer);
  outcome.stats = result.stats;
  outcome.stats.clamp_events = clamp_events;
  outcome.t_final = result.t_final;
  if (result.termination == Termination::Stopped) {
    outcome.status = RunStatus::Extinct;
    outcome.extinction_lo = result.t_before;
    outcome.extinction_hi = result.t_final;
  }

  for (std::size_t j = 0; j < result.times.size(); ++j) {
    const double t = result.times[j];
    TraceSection sec;
    sec.t = t;
    sec.s = system.unpack(result.states[j]).s;
    sec.y = mesh.points();
    sec.w = system.profile(t, result.states[j]);
    sec.u.reserve(sec.w.size());
    for (double w : sec.w) sec.u.push_back(w > 0.0 ? std::pow(w, beta) : 0.0);
    outcome.sections.push_back(std::move(sec));
  }

  if (cfg.oracle) {
    const auto oracle = analytic::by_name(*cfg.oracle);
    if (!outcome.sections.empty()) outcome.errors = compare_sections(outcome.sections, oracle);
    for (const auto& sample : tracks ? outcome.interface : std::vector<InterfaceSample>{}) {
      const double s_an = oracle.interface(sample.t);
      if (s_an > 0.0) outcome.max_interface_error = std::max(outcome.max_interface_error, std::abs(sample.s - s_an) / s_an);
    }
  }
  outcome.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (write) {
    const fs::path& dir = cfg.output_dir;
    fs::create_directories(dir);
    write_solution_csv(outcome.sections, dir / "solution.csv");
    if (cfg.write_interface) {
      std::optional<analytic::Solution> oracle;
      if (cfg.oracle) oracle = analytic::by_name(*cfg.oracle);
      std::string text = oracle ? "t,s,s_analytic,rel_error\n" : "t,s\n";
      for (const auto& sample : outcome.interface) {
        text += g17(sample.t) + ',' + g17(sample.s);
        if (oracle) {
          const double s_an = oracle->interface(sample.t);
          text += ',' + g17(s_an) + ',' + (s_an > 0.0 ? g17(std::abs(sample.s - s_an) / s_an) : std::string("nan"));
        }
        text += '\n';
      }
      write_atomic(dir / "interface.csv", text);
    }
    if (outcome.errors) {
      std::ostringstream os;
      write_error_csv(*outcome.errors, os);
      write_atomic(dir / "error.csv", os.str());
    }
    const auto& st = outcome.stats;
    std::string stats = "key,value\n";
    stats += "status," + std::string(outcome.status == RunStatus::Extinct ? "extinct" : "completed") + '\n';
    stats += "t_final," + g17(outcome.t_final) + '\n';
    if (outcome.status == RunStatus::Extinct) {
      stats += "extinction_lo," + g17(outcome.extinction_lo) + '\n';
      stats += "extinction_hi," + g17(outcome.extinction_hi) + '\n';
    }
    stats += "steps_accepted," + std::to_string(st.steps_accepted) + '\n';
    stats += "steps_rejected," + std::to_string(st.steps_rejected) + '\n';
    stats += "rhs_evals," + std::to_string(st.rhs_evals) + '\n';
    stats += "jacobian_evals," + std::to_string(st.jacobian_evals) + '\n';
    stats += "lu_decompositions," + std::to_string(st.lu_decompositions) + '\n';
    stats += "newton_iters," + std::to_string(st.newton_iters) + '\n';
    stats += "clamp_events," + std::to_string(st.clamp_events) + '\n';
    if (outcome.errors) {
      stats += "AL," + g17(outcome.errors->al) + '\n';
      stats += "max_l2_rel," + g17(*std::max_element(outcome.errors->l2.begin(), outcome.errors->l2.end())) + '\n';
      stats += "max_interface_rel," + g17(outcome.max_interface_error) + '\n';
    }
    write_atomic(dir / "stats.csv", stats);
    write_atomic(dir / "config.cfg", cfg.source.dump());
  }
  return outcome;
}

namespace {

std::vector<std::string> expand_values(const std::string& key, const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      if (!item.empty()) out.push_back(item);
      continue;
    }
    int lo = 0;
    int hi = 0;
    try {
      lo = std::stoi(item.substr(0, dots));
      hi = std::stoi(item.substr(dots + 2));
    } catch (const std::logic_error&) {
      raise(ErrorCode::ConfigError, "sweep range '" + item + "' for " + key + " is not integer");
    }
    for (int v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
  }
  if (out.empty()) raise(ErrorCode::ConfigError, "sweep key " + key + " has no values");
  return out;
}

struct Combination {
  std::string N;
  std::string M;
  std::string strategy;
  std::string d;
};

}  // namespace

std::vector<SweepRow> sweep(const Config& base, const std::string& grid, int jobs) {
  const ExperimentConfig base_cfg = build_experiment(base);
  if (!base_cfg.oracle) raise(ErrorCode::ConfigError, base.source() + ": sweeps need output.oracle");
  std::map<std::string, std::vector<std::string>> axes = {
      {"N", {std::to_string(base_cfg.mesh.N)}},
      {"M", {std::to_string(base_cfg.mesh.M)}},
      {"strategy", {to_string(base_cfg.mesh.strategy)}},
      {"d", {std::to_string(base_cfg.mesh.d)}},
  };
  // Whitespace separates items as well as ';'.
  std::string items = grid;
  std::replace_if(items.begin(), items.end(), [](unsigned char ch) { return std::isspace(ch) != 0; }, ';');
  std::stringstream ss(items);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) raise(ErrorCode::ConfigError, "sweep grid item '" + part + "' needs key=values");
    const std::string key = part.substr(0, eq);
    if (!axes.count(key)) raise(ErrorCode::ConfigError, "sweep grid key '" + key + "' (use N, M, strategy, d)");
    axes[key] = expand_values(key, part.substr(eq + 1));
  }

  std::vector<Combination> combos;
  for (const auto& n : axes["N"]) {
    for (const auto& st : axes["strategy"]) {
      for (const auto& m : axes["M"]) {
        for (const auto& d : axes["d"]) combos.push_back({n, m == "N" ? n : m, st, d});
      }
    }
  }

  std::vector<SweepRow> rows(combos.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < combos.size(); k = next++) {
      const auto& combo = combos[k];
      SweepRow& row = rows[k];
      row.al = std::numeric_limits<double>::quiet_NaN();
      row.max_l2 = row.al;
      try {
        Config c = base;
        c.set("mesh.N", combo.N);
        c.set("mesh.M", combo.M);
        c.set("mesh.strategy", combo.strategy);
        c.set("mesh.d", combo.d);
        c.set("output.dir", (base_cfg.output_dir / "sweep" /
                             ("N" + combo.N + "_M" + combo.M + "_" + combo.strategy + "_d" + combo.d))
                                .string());
        const ExperimentConfig cfg = build_experiment(c);
        row.strategy = cfg.mesh.strategy;
        row.M = cfg.mesh.M;
        row.d = cfg.mesh.d;
        row.N = cfg.mesh.strategy == MeshStrategy::D4 ? cfg.mesh.N : subdivided_interval_count(cfg.mesh);
        const RunOutcome out = run_experiment(cfg, true);
        row.status = out.status == RunStatus::Extinct ? "extinct" : "ok";
        if (out.errors) {
          row.al = out.errors->al;
          row.max_l2 = *std::max_element(out.errors->l2.begin(), out.errors->l2.end());
        }
      } catch (const Error& e) {
        row.status = std::string(to_string(e.code()));
      } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
      }
      if (row.N == 0) {
        row.N = std::atoi(combo.N.c_str());
        row.M = std::atoi(combo.M.c_str());
        row.d = std::atoi(combo.d.c_str());
        try {
          row.strategy = parse_mesh_strategy(combo.strategy);
        } catch (const Error&) {
        }
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(combos.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const fs::path& path) {
  std::string out = "N,strategy,M,d,AL,max_l2_rel,status\n";
  for (const auto& r : rows) {
    out += csv_join({std::to_string(r.N), to_string(r.strategy), std::to_string(r.M), std::to_string(r.d), g17(r.al),
                     g17(r.max_l2), r.status});
    out += '\n';
  }
  write_atomic(path, out);
}

std::vector<SweepRow> optimal_rows(const std::vector<SweepRow>& rows) {
  std::map<int, SweepRow> best;
  for (const auto& r : rows) {
    if (!std::isfinite(r.al)) continue;
    auto it = best.find(r.N);
    if (it == best.end() || r.al < it->second.al) best[r.N] = r;
  }
  std::vector<SweepRow> out;
  for (auto& [n, r] : best) out.push_back(r);
  return out;
}

}  // namespace frontline
