#include <benchmark/benchmark.h>

#include "kva/capital_profile.hpp"
#include "kva/exposure.hpp"
#include "kva/io.hpp"
#include "kva/pde.hpp"
#include "kva/scenarios.hpp"

using namespace kva;

namespace {

SwapSpec swap10(const DiscountCurve& curve) {
  SwapSpec s;
  s.id = "s";
  s.counterparty_id = "cp";
  s.maturity = 10.0;
  s.fixed_frequency = 2;
  s.float_frequency = 4;
  s.fixed_rate = par_rate(curve, s);
  return s;
}

void BM_SimulatePaths(benchmark::State& state) {
  const MarketEnvironment env;
  const auto grid = uniform_grid(10.0, 120);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(env.model(), grid, n, env.seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePaths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ExposureProfile(benchmark::State& state) {
  const MarketEnvironment env;
  const NettingSet set{"cp", {swap10(env.curve)}, false};
  const auto grid = simulation_grid(set.trades, 10.0, 1);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_profile(set, env.model(), grid, grid, n, env.seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExposureProfile)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CapitalProfile(benchmark::State& state) {
  const MarketEnvironment env;
  const NettingSet set{"cp", {swap10(env.curve)}, false};
  const auto grid = simulation_grid(set.trades, 10.0, 1);
  const auto ex = build_profile(set, env.model(), grid, grid, 2000, env.seed);
  auto cp = find_rating(default_ratings(), "BB");
  for (auto _ : state) benchmark::DoNotOptimize(build_capital_profile(ex, set, cp, CapitalConfig{}, env.curve));
}
BENCHMARK(BM_CapitalProfile)->Unit(benchmark::kMicrosecond);

void BM_SolvePde(benchmark::State& state) {
  PdeProblem p;
  p.r = p.repo = 0.02;
  p.lambda_b = p.lambda_c = 0.01;
  p.recovery_b = p.recovery_c = 0.4;
  p.gamma_k = 0.1;
  p.capital = [](double, double, double, double) { return 5.0; };
  p.n_space = p.n_time = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_pde(p));
}
BENCHMARK(BM_SolvePde)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
