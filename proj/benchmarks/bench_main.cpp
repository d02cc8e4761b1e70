#include <benchmark/benchmark.h>

#include "betheasep/bethe.hpp"
#include "betheasep/forests.hpp"
#include "betheasep/spectrum.hpp"

using namespace betheasep;

static void BM_BuildGenerator(benchmark::State& state) {
  const asep::StateSpace space = asep::enumerate_states(int(state.range(0)), 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(asep::build_generator(space, {Complex(0.7)}));
}
BENCHMARK(BM_BuildGenerator)->Arg(8)->Arg(12)->Arg(16);

static void BM_SolveTwoParticle(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(bethe::solve_two_particle(int(state.range(0)), {Complex(0.7)}));
}
BENCHMARK(BM_SolveTwoParticle)->Arg(4)->Arg(8)->Arg(16);

static void BM_PolyRoots(benchmark::State& state) {
  const int deg = int(state.range(0));
  ComplexVector coeffs(deg + 1);
  for (int i = 0; i <= deg; ++i) coeffs[i] = Complex(1.0 + i % 3, (i % 5) - 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(numerics::poly_roots(coeffs));
}
BENCHMARK(BM_PolyRoots)->Arg(8)->Arg(16)->Arg(32);

static void BM_Certify(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(spectrum::certify(int(state.range(0)), 2, {Complex(0.7)}));
}
BENCHMARK(BM_Certify)->Arg(5)->Arg(7);

static void BM_AdmissibleCount(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(forests::admissible_count(int(state.range(0))));
}
BENCHMARK(BM_AdmissibleCount)->Arg(3)->Arg(5);

static void BM_InvolutionCheck(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(forests::involution_check(int(state.range(0))));
}
BENCHMARK(BM_InvolutionCheck)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
