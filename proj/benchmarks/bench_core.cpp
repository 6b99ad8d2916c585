#include "glearn/graph.hpp"
#include "glearn/harness.hpp"
#include "glearn/signal.hpp"
#include "glearn/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace glearn;

Matrix er_laplacian(int n, std::uint64_t seed) {
  Rng rng = derive_rng(seed, 0, 1);
  return build_laplacian(generate_er(n, 0.2, rng));
}

void BM_Eigendecompose(benchmark::State& state) {
  const Matrix L = er_laplacian(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(L));
}
BENCHMARK(BM_Eigendecompose)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_SimplexProjection(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  Vector v(state.range(0));
  for (auto& x : v) x = gauss(rng);
  for (auto _ : state) benchmark::DoNotOptimize(simplex_projection(v, 25.0));
}
BENCHMARK(BM_SimplexProjection)->Arg(1225)->Arg(10000);

// heat-filtered signals on ER(n, 0.2), M = 200
void BM_SolveGlSigrep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Spectrum spec = eigendecompose(er_laplacian(n, 3));
  Rng rng = derive_rng(3, 0, 2);
  const SignalMatrix y = generate_signals(spec, HeatFilter{0.3}, 200, rng);
  const SolverConfig cfg;
  int iters = 0;
  for (auto _ : state) {
    const SolveResult r = solve_gl_sigrep(y.signals(), cfg);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.objective);
  }
  state.counters["iterations"] = iters;
}
BENCHMARK(BM_SolveGlSigrep)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
