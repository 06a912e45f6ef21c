#include <benchmark/benchmark.h>

#include "fsburgers/solver.hpp"
#include "fsburgers/specfun.hpp"

using namespace fsburgers;

static void BM_MittagLeffler(benchmark::State& state) {
  const double z = -static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(specfun::mittag_leffler2(0.5, 1.5, z));
}
BENCHMARK(BM_MittagLeffler)->Arg(1)->Arg(10)->Arg(100)->Arg(1000);

static void BM_KernelTable(benchmark::State& state) {
  const auto basis = make_basis(static_cast<std::size_t>(state.range(0)), dealiased_grid_size(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel_table(1.5, 0.5, 1e-3, 500, basis));
}
BENCHMARK(BM_KernelTable)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_Nonlinearity(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto basis = make_basis(n, dealiased_grid_size(n));
  const SpectralField u = random_field(n, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(nonlinearity(u, basis));
}
BENCHMARK(BM_Nonlinearity)->Arg(16)->Arg(32)->Arg(64);

static void BM_StepScheme(benchmark::State& state) {
  ModelParams p;
  p.n_steps = static_cast<std::size_t>(state.range(0));
  const KernelTable table = make_kernel_table(p);
  const NoisePath path = sample_path(p.noise, p.basis, p.dt, p.n_steps, 42, 0);
  SpectralField u0(32);
  u0[0] = 1.0;
  u0[1] = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(step_scheme(p, u0, path, table));
}
BENCHMARK(BM_StepScheme)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
