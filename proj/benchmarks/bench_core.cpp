#include "crossdiff/diagnostics/residuals.hpp"
#include "crossdiff/entropy_family.hpp"
#include "crossdiff/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace crossdiff;

namespace {

const Parameters kNu2 = Parameters::make(2.0);

void BM_Step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SchemeConfig config;
  config.n_cells = n;
  config.epsilon = 1e-3;
  SpeciesState s = initial_data("mixed_oscillatory", {}, Grid1D(n));
  const double dt = stable_dt(s, config, kNu2);
  for (auto _ : state) {
    s = step(s, dt, config, kNu2);
    benchmark::DoNotOptimize(s.m.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Step)->Arg(128)->Arg(512)->Arg(2048);

void BM_PhiDirect(benchmark::State& state) {
  const EntropyIndex s(static_cast<double>(state.range(0)) / 100.0, kNu2);
  double a = 1.0;
  for (auto _ : state) {
    a += 0.0137;
    if (a > 1.99) {
      a = 1.01;
    }
    benchmark::DoNotOptimize(phi(s, a, kNu2));
  }
}
BENCHMARK(BM_PhiDirect)->Arg(70)->Arg(150)->Arg(175);

void BM_TableBuild(benchmark::State& state) {
  const EntropyIndex s(1.5, kNu2);
  for (auto _ : state) {
    EntropyTable table(s, kNu2);
    benchmark::DoNotOptimize(table.phi_values().data());
  }
}
BENCHMARK(BM_TableBuild)->Unit(benchmark::kMillisecond);

void BM_TableLookup(benchmark::State& state) {
  const EntropyTable table(EntropyIndex(1.5, kNu2), kNu2);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ua(1.0, 2.0);
  std::vector<double> points(4096);
  for (double& p : points) {
    p = ua(rng);
  }
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.flux(points[k++ & 4095]));
  }
}
BENCHMARK(BM_TableLookup);

void BM_HMinus1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = std::sin(0.37 * static_cast<double>(i)) + 0.1 * std::cos(3.1 * static_cast<double>(i));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagnostics::hminus1_norm_squared(r));
  }
}
BENCHMARK(BM_HMinus1)->Arg(128)->Arg(512)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
