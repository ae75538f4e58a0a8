#include <cmath>

#include <benchmark/benchmark.h>

#include "frontline/analytic.hpp"
#include "frontline/semidiscrete.hpp"
#include "frontline/stiff_ode.hpp"

using namespace frontline;

namespace {

SemidiscreteSystem barenblatt_system(int N) {
  PowerLawParams p;
  p.n = 6.0;
  ProblemSpec spec{p, BoundaryCondition::symmetry(), {}};
  spec.initial.L0 = 1.0;
  const Mesh mesh = build_mesh({MeshStrategy::D4, N, std::max(2, N / 2), 3});
  return SemidiscreteSystem(RhsContext{spec, mesh, validate(spec), Guards{}, 0.0, 0.0});
}

std::vector<double> barenblatt_state(const SemidiscreteSystem& sys) {
  const double s = analytic::barenblatt_front(6.0, 0.0);
  std::vector<double> w;
  for (double y : sys.context().mesh.points()) w.push_back(std::pow(s, -5.0) * (1 - y * y));
  return sys.pack(sys.initial_state(w, s));
}

void BM_RhsPowerLaw(benchmark::State& state) {
  const auto sys = barenblatt_system(static_cast<int>(state.range(0)));
  const auto y = barenblatt_state(sys);
  std::vector<double> dy(y.size());
  for (auto _ : state) {
    sys(0.0, y, dy);
    benchmark::DoNotOptimize(dy.data());
  }
}
BENCHMARK(BM_RhsPowerLaw)->Arg(20)->Arg(60)->Arg(200);

void BM_FdJacobian(benchmark::State& state) {
  const auto sys = barenblatt_system(static_cast<int>(state.range(0)));
  const auto y = barenblatt_state(sys);
  const std::vector<double> scale(y.size(), 1e-9);
  const auto rhs = sys.as_rhs();
  for (auto _ : state) benchmark::DoNotOptimize(fd_jacobian(rhs, y, 0.0, scale));
}
BENCHMARK(BM_FdJacobian)->Arg(20)->Arg(60)->Arg(200);

void BM_BarenblattIntegration(benchmark::State& state) {
  const auto sys = barenblatt_system(static_cast<int>(state.range(0)));
  const auto y0 = barenblatt_state(sys);
  const std::vector<double> out{200.0};
  for (auto _ : state) benchmark::DoNotOptimize(integrate(sys.as_rhs(), y0, 0.0, 200.0, out, Tolerances{}));
}
BENCHMARK(BM_BarenblattIntegration)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
