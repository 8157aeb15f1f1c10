#include <benchmark/benchmark.h>

#include "fractent/analysis.hpp"

using namespace fractent;

static void BM_BuildCarpet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_carpet(n, 1).size());
}
BENCHMARK(BM_BuildCarpet)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

static void BM_Diagonalize(benchmark::State& state) {
  const auto lat = build_carpet(static_cast<int>(state.range(0)), 1);
  const auto h = build_h1(lat, 1.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(h).eigenvalues.data());
}
BENCHMARK(BM_Diagonalize)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

// contour pipeline on one cut: C_A, its spectrum and the per-site field
static void BM_Contour(benchmark::State& state) {
  const auto lat = build_carpet(static_cast<int>(state.range(0)), 1);
  auto eig = diagonalize(build_h1(lat, 1.0, 0.0));
  apply_filling(eig, HoppingModel::h1(), lat.size(), Filling::kFermiLevel);
  const auto p = partition_IV(lat);
  for (auto _ : state) {
    const auto c = entanglement_contour(entanglement_spectrum(correlation_matrix(eig, p, 1)));
    benchmark::DoNotOptimize(c.total);
  }
}
BENCHMARK(BM_Contour)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

static void BM_StochasticDos(benchmark::State& state) {
  const auto h = build_h1(build_carpet(static_cast<int>(state.range(0)), 1), 1.0, 0.0);
  DosOptions o;
  o.method = DosMethod::kStochasticChebyshev;
  o.moments = 256;
  o.random_vectors = 10;
  for (auto _ : state) benchmark::DoNotOptimize(dos(h, o).density.data());
}
BENCHMARK(BM_StochasticDos)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_EfFamilies(benchmark::State& state) {
  const auto lat = build_carpet(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ef_compose(ef_families(lat)).count());
}
BENCHMARK(BM_EfFamilies)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
