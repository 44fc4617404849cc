// Serial reference kernels against their OpenMP versions on P2 operators of
// the unit square. Arg 0 selects the execution path (0 serial, 1 parallel),
// arg 1 the cells per side.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "fracvisco/fem.hpp"
#include "fracvisco/kernels.hpp"

using namespace fracvisco;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

std::shared_ptr<const FeSpace> p2_space(std::size_t n) {
  return std::make_shared<const FeSpace>(std::make_shared<const Mesh>(build_unit_square(n)), 2,
                                         std::set<Side>(all_sides.begin(), all_sides.end()));
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

void BM_Spmv(benchmark::State& state) {
  const auto space = p2_space(static_cast<std::size_t>(state.range(1)));
  const auto k = assemble_stiffness(*space, Material{});
  const auto x = random_vector(k.ncols(), 1);
  std::vector<double> y(k.nrows());
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    kernels::spmv(exec, k.view(), x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(k.nnz()));
}

void BM_Dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto x = random_vector(n, 2), y = random_vector(n, 3);
  const Exec exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot(exec, x, y));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}

// History combination of 128 stored steps.
void BM_WeightedSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  std::vector<std::vector<double>> hist;
  for (unsigned i = 0; i < 128; ++i) hist.push_back(random_vector(n, 10 + i));
  const auto c = random_vector(hist.size(), 4);
  std::vector<double> out(n);
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    kernels::weighted_sum(exec, c, hist, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * hist.size()));
}

void BM_AssembleStiffness(benchmark::State& state) {
  const auto space = p2_space(static_cast<std::size_t>(state.range(1)));
  AssemblyOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(*space, Material{}, opts));
}

}  // namespace

BENCHMARK(BM_Spmv)->ArgsProduct({{0, 1}, {32, 128}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Dot)->ArgsProduct({{0, 1}, {1 << 16, 1 << 20}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WeightedSum)->ArgsProduct({{0, 1}, {8450, 132098}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AssembleStiffness)->ArgsProduct({{0, 1}, {32, 64}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
