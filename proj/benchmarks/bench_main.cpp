#include <benchmark/benchmark.h>

#include <numbers>

#include "trispec/geometry.hpp"
#include "trispec/lattice.hpp"
#include "trispec/smoothing.hpp"
#include "trispec/sphere.hpp"

using namespace trispec;

namespace {

void BM_EnumerateShell(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::int64_t q = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_shell({n, q}));
}
BENCHMARK(BM_EnumerateShell)->Args({2, 5525})->Args({3, 2501})->Args({4, 1000});

void BM_TriangleCount(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::int64_t q = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(triangle_count({n, q, q, q}));
}
BENCHMARK(BM_TriangleCount)->Args({2, 625})->Args({3, 101});

void BM_ThreeJZero(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(three_j_zero({l, l + 2, 2 * l}));
}
BENCHMARK(BM_ThreeJZero)->Arg(10)->Arg(200);

void BM_SphereMeasure(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sphere_measure(state.range(0)));
}
BENCHMARK(BM_SphereMeasure)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BuildKernel(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(0.9 * std::numbers::pi, grid));
}
BENCHMARK(BM_BuildKernel)->Arg(2048)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ConvolveLattice(benchmark::State& state) {
  const auto kernel = build_kernel(0.9 * std::numbers::pi);
  const double s = static_cast<double>(state.range(0));
  const TorusLattice lattice(2, 5.0 * s + kernel.trunc_radius() + 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(lattice, kernel, {3 * s, 4 * s, 5 * s}));
}
BENCHMARK(BM_ConvolveLattice)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ConvolveMeasure(benchmark::State& state) {
  const auto kernel = build_kernel(0.9 * std::numbers::pi, 4096, 1e-4);
  const auto measure = torus_measure(2, 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(measure, kernel, {9, 12, 15}));
}
BENCHMARK(BM_ConvolveMeasure)->Unit(benchmark::kMillisecond);

void BM_LerayOracle(benchmark::State& state) {
  const FrequencyTriple t{3, 4, 5};
  const double h = classify(t, 0.0).margin / 20.0;
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(leray_volume_oracle(3, t, h, state.range(0), seed++));
}
BENCHMARK(BM_LerayOracle)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
