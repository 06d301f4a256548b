#include <benchmark/benchmark.h>

#include "lsinv/elliptic.hpp"
#include "lsinv/geometry.hpp"
#include "lsinv/levelset.hpp"
#include "lsinv/shapederiv.hpp"
#include "lsinv/shapes.hpp"

namespace {

using namespace lsinv;

const ShapeDescriptor kDisk = ShapeDescriptor::disk({0.47, 0.52}, 0.3);

ScalarField source(const GridSpec& g) {
  return apply_P(signed_distance_field(kDisk, g));
}

// Cached factorization: the per-step cost inside the evolution loop.
void BM_DirichletSolve(benchmark::State& state) {
  const GridSpec g = GridSpec::unit_square(static_cast<int>(state.range(0)));
  const ScalarField f = source(g);
  solve_dirichlet(f);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(f));
}
BENCHMARK(BM_DirichletSolve)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_DirichletFactorize(benchmark::State& state) {
  const GridSpec g = GridSpec::unit_square(static_cast<int>(state.range(0)));
  const ScalarField f = source(g);
  for (auto _ : state) {
    clear_solver_cache();
    benchmark::DoNotOptimize(solve_dirichlet(f));
  }
}
BENCHMARK(BM_DirichletFactorize)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_DirichletConjugateGradient(benchmark::State& state) {
  const GridSpec g = GridSpec::unit_square(static_cast<int>(state.range(0)));
  const ScalarField f = source(g);
  const SolverConfig cg{SolverMethod::ConjugateGradient, 1e-10, 20000};
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(f, cg));
}
BENCHMARK(BM_DirichletConjugateGradient)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_ExtractZeroLevel(benchmark::State& state) {
  const GridSpec g = GridSpec::unit_square(static_cast<int>(state.range(0)));
  const ScalarField phi = signed_distance_field(kDisk, g);
  for (auto _ : state) benchmark::DoNotOptimize(extract_zero_level(phi));
}
BENCHMARK(BM_ExtractZeroLevel)->Arg(129)->Arg(257)->Unit(benchmark::kMicrosecond);

void BM_SingleLayerPotential(benchmark::State& state) {
  const GridSpec g = GridSpec::unit_square(static_cast<int>(state.range(0)));
  const CurveSet c = extract_zero_level(signed_distance_field(kDisk, g));
  BoundaryDensity q = BoundaryDensity::zero(c);
  for (auto& vals : q.values) {
    for (double& v : vals) v = 1.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(single_layer_potential(q, g));
}
BENCHMARK(BM_SingleLayerPotential)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_VelocityIss(benchmark::State& state) {
  const GridSpec g = GridSpec::unit_square(static_cast<int>(state.range(0)));
  const ScalarField phi = signed_distance_field(ShapeDescriptor::disk({0.4, 0.4}, 0.2), g);
  const ScalarField y = forward(source(g));
  EvolutionConfig cfg;
  cfg.eps = SmoothingParam::grid_relative(g);
  for (auto _ : state) benchmark::DoNotOptimize(velocity_iss(phi, y, cfg));
}
BENCHMARK(BM_VelocityIss)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_Reinitialize(benchmark::State& state) {
  const GridSpec g = GridSpec::unit_square(static_cast<int>(state.range(0)));
  const ScalarField phi = 3.0 * signed_distance_field(kDisk, g);
  for (auto _ : state) benchmark::DoNotOptimize(reinitialize(phi));
}
BENCHMARK(BM_Reinitialize)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
