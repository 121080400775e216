#include <random>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "isingops/contraction.hpp"
#include "isingops/meromfuncs.hpp"

using namespace isingops;

namespace {

const TestFunction2D kG = TestFunction2D::spline({0.0, 0.0}, 0.5, 8);

void run_block(benchmark::State& state, bool parallel) {
  const int nodes = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1)), n = static_cast<int>(state.range(2));
  const GridPtr g = make_grid(nodes, 4.0);
  std::mt19937_64 rng(3);
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const FockVector a = FockVector::random(g, 3, rng), b = FockVector::random(g, 3, rng);
  const std::vector<StatePair> pairs = {{&a, &b}, {&b, &a}};
  const GridKernel K(fam, m, n, g);
  for (auto _ : state) {
    auto v = parallel ? block_elements(K, pairs, true) : block_elements_serial(K, pairs);
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

void BM_BlockSerial(benchmark::State& s) { run_block(s, false); }
void BM_BlockParallel(benchmark::State& s) { run_block(s, true); }

void BM_ModdPairingSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::vector<cplx> z(n);
  for (auto& v : z) v = cplx(U(rng), U(rng));
  for (auto _ : state) benchmark::DoNotOptimize(modd_pairing_sum(z));
}

void BM_ModdProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::vector<cplx> z(n);
  for (auto& v : z) v = cplx(U(rng), U(rng));
  for (auto _ : state) benchmark::DoNotOptimize(modd_product(z));
}

}  // namespace

BENCHMARK(BM_BlockSerial)->Args({16, 2, 1})->Args({16, 3, 2})->Args({32, 2, 1})->Args({32, 1, 2});
BENCHMARK(BM_BlockParallel)->Args({16, 2, 1})->Args({16, 3, 2})->Args({32, 2, 1})->Args({32, 1, 2});
BENCHMARK(BM_ModdPairingSum)->DenseRange(3, 9, 2);
BENCHMARK(BM_ModdProduct)->DenseRange(3, 9, 2);

BENCHMARK_MAIN();
