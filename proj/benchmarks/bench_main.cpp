#include "nashlab/assembly.hpp"
#include "nashlab/expm.hpp"
#include "nashlab/scenario.hpp"
#include "nashlab/semigroup.hpp"

#include <benchmark/benchmark.h>

using namespace nashlab;

namespace {

struct CubeSystem {
  Mesh mesh;
  AssembledSystem sys;
};

CubeSystem cube_system(int divisions) {
  DomainSpec domain;
  domain.divisions = {divisions};
  CubeSystem c{build_mesh(domain), {}};
  CoefficientSpec coefficient;
  coefficient.value = 2.0;
  BoundarySpec boundary;
  boundary.kind = "multiplication";
  boundary.beta = {-0.05};
  const CoefficientField field = build_coefficient(c.mesh, coefficient);
  c.sys = assemble_system(c.mesh, field, build_boundary(c.mesh, boundary, "."), field.alpha);
  return c;
}

void BM_Expm(benchmark::State& state) {
  const CubeSystem c = cube_system(static_cast<int>(state.range(0)));
  const SemigroupEvaluator ev(c.sys);
  const Matrix a = -0.1 * ev.generator();
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
  state.counters["unknowns"] = static_cast<double>(a.rows());
}
BENCHMARK(BM_Expm)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_AssembleSystem(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cube_system(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AssembleSystem)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_TraceNorm(benchmark::State& state) {
  const CubeSystem c = cube_system(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_trace_norm(c.sys));
}
BENCHMARK(BM_TraceNorm)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ImplicitEuler(benchmark::State& state) {
  const CubeSystem c = cube_system(static_cast<int>(state.range(0)));
  const FieldVector u = FieldVector::Ones(c.sys.size());
  for (auto _ : state) benchmark::DoNotOptimize(implicit_euler_apply(c.sys, 0.1, u, 20));
}
BENCHMARK(BM_ImplicitEuler)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
