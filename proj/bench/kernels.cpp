// Serial reference against the OpenMP path for the three heavy kernels.
// Threads follow OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "gifsdim/attractor.hpp"
#include "gifsdim/dimension.hpp"
#include "gifsdim/properties.hpp"

using namespace gifsdim;

namespace {

Exec exec_arg(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_IterateCover(benchmark::State& state) {
  const GifsGraph g = fixture("main");
  const auto seeds = default_seeds(g);
  for (auto _ : state) benchmark::DoNotOptimize(iterate_cover(g, seeds, 9, exec_arg(state)));
}

void BM_IterateCoverReference(benchmark::State& state) {
  const GifsGraph g = fixture("main");
  const auto seeds = default_seeds(g);
  for (auto _ : state) benchmark::DoNotOptimize(iterate_cover_reference(g, seeds, 7));
}

void BM_CountCells(benchmark::State& state) {
  const GifsGraph g = fixture("main");
  const auto seeds = default_seeds(g);
  CountOptions opt;
  opt.resolution = 8;
  opt.depth = 9;
  for (auto _ : state) benchmark::DoNotOptimize(count_cells(g, seeds, opt, exec_arg(state)).size());
}

void BM_CountCellsAdaptive(benchmark::State& state) {
  const GifsGraph g = fixture("boundary");
  const auto seeds = default_seeds(g);
  CountOptions opt;
  opt.resolution = 9;
  opt.depth = 20;
  opt.adaptive = true;
  for (auto _ : state) benchmark::DoNotOptimize(count_cells(g, seeds, opt, exec_arg(state)).size());
}

void BM_SpectralRoots(benchmark::State& state) {
  std::mt19937_64 rng(7);
  GifsGraph g = random_gifs(rng, 3);
  while (g.vertex_count() < 3) g = random_gifs(rng, 3);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_roots(g, Svf::phi, 32, 1e-9, exec_arg(state)));
}

}  // namespace

BENCHMARK(BM_IterateCover)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IterateCoverReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountCells)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountCellsAdaptive)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectralRoots)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
