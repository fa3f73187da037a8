#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "poplotto/payoff.hpp"
#include "poplotto/solver.hpp"
#include "poplotto/structure.hpp"

namespace {

using namespace poplotto;

// Log-uniform budgets in [0.1, 100], unnormalized uniform masses.
DiscreteBudgetDistribution random_distribution(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> budgets;
  while (static_cast<int>(budgets.size()) < n) {
    const double b = 0.1 * std::pow(1000.0, u(rng));
    bool dup = false;
    for (double x : budgets) dup = dup || std::abs(x - b) < 1e-6;
    if (!dup) budgets.push_back(b);
  }
  std::sort(budgets.begin(), budgets.end());
  std::vector<BudgetGroup> groups;
  for (double b : budgets) groups.push_back({b, 0.05 + u(rng)});
  return DiscreteBudgetDistribution(std::move(groups));
}

void BM_Solve(benchmark::State& state) {
  const DiscreteBudgetDistribution dist = random_distribution(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(solve(dist));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Solve)->RangeMultiplier(4)->Range(1, 256)->Complexity();

void BM_WinProb(benchmark::State& state) {
  const EquilibriumSolution sol = solve(random_distribution(static_cast<int>(state.range(0)), 11));
  const PiecewiseDensity f = sol.strategies.front().normalized();
  const PiecewiseDensity h = sol.strategies.back().normalized();
  for (auto _ : state) benchmark::DoNotOptimize(win_prob(f, h));
}
BENCHMARK(BM_WinProb)->Arg(4)->Arg(64);

void BM_OutcomeMatrix(benchmark::State& state) {
  const EquilibriumSolution sol = solve(random_distribution(static_cast<int>(state.range(0)), 13));
  for (auto _ : state) benchmark::DoNotOptimize(outcome_matrix(sol));
}
BENCHMARK(BM_OutcomeMatrix)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
