// Parallel kernels against their serial references, plus one end-to-end
// neighbourhood fit.

#include <benchmark/benchmark.h>

#include <random>

#include "scoreinf/inference.hpp"
#include "scoreinf/kernels.hpp"
#include "scoreinf/samplers.hpp"

using namespace scoreinf;

namespace {

Matrix random_rows(Index n, Index m) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  Matrix x(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) x(i, j) = nd(gen);
  return x;
}

void BM_Gram(benchmark::State& state) {
  const Matrix x = random_rows(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram(x));
}

void BM_GramReference(benchmark::State& state) {
  const Matrix x = random_rows(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram_reference(x));
}

void BM_Bootstrap(benchmark::State& state) {
  const Matrix z = random_rows(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::bootstrap_maxima(z, 500, 7, 0.01));
}

void BM_BootstrapReference(benchmark::State& state) {
  const Matrix z = random_rows(state.range(0), state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::bootstrap_maxima_reference(z, 500, 7, 0.01));
}

void BM_Neighbourhood(benchmark::State& state) {
  const auto p = static_cast<int>(state.range(0));
  const ModelSpec spec = knn_graph_spec(Family::Gaussian, p, 4, {0.5, 0.3});
  const DataMatrix data = sample(spec, 2000, 3);
  for (auto _ : state) {
    const NodeScoreCache cache(spec, data);
    benchmark::DoNotOptimize(neighborhood_estimates(cache, 0, 1.0, 1.0));
  }
}

}  // namespace

BENCHMARK(BM_Gram)->Args({2000, 99})->Args({20000, 99})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramReference)->Args({2000, 99})->Args({20000, 99})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bootstrap)->Args({2000, 49})->Args({4000, 98})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapReference)->Args({2000, 49})->Args({4000, 98})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Neighbourhood)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
