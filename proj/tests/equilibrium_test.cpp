#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "poplotto/equilibrium.hpp"
#include "poplotto/payoff.hpp"
#include "poplotto/solver.hpp"
#include "poplotto/structure.hpp"

namespace {

using namespace poplotto;

EquilibriumSolution solved(std::vector<BudgetGroup> groups) {
  return solve(DiscreteBudgetDistribution(std::move(groups)));
}

// The (1, 10) fixture with 0.05 of group 1's mass moved from [0, 1] to an
// atom at 3.
EquilibriumSolution perturbed() {
  return make_solution({PiecewiseDensity({0, 1, 2}, {0.2, 0.25}, {{3.0, 0.05}}),
                        PiecewiseDensity({2, 18}, {1.0 / 32})});
}

TEST(VerifyNash, SolveOutputsPass) {
  EXPECT_TRUE(verify_nash(solved({{1, 1}})).pass);
  EXPECT_TRUE(verify_nash(solved({{1, 0.5}, {1.5, 0.5}})).pass);
  EXPECT_TRUE(verify_nash(solved({{1, 0.5}, {10, 0.5}})).pass);
}

TEST(VerifyNash, DicePopulationPasses) {
  const EquilibriumReport r =
      verify_nash(dice_to_population({{2, 2, 4, 4, 9, 9}, {1, 1, 6, 6, 8, 8}, {3, 3, 5, 5, 7, 7}}));
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.worst_violation(), 1e-12);
}

TEST(VerifyNash, PerturbationFails) {
  const EquilibriumReport r = verify_nash(perturbed());
  EXPECT_FALSE(r.pass);
  // The atom at 3 sits on a segment of height 1/32.
  EXPECT_NEAR(r.monotone_violation, 0.05, 1e-12);
  EXPECT_EQ(r.g_at_zero, 0.0);
}

TEST(VerifyNash, AtomAtZeroFails) {
  const EquilibriumSolution sol = make_solution({PiecewiseDensity({0, 2}, {0.25}, {{0.0, 0.5}})});
  const EquilibriumReport r = verify_nash(sol);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.g_at_zero, 0.5, 1e-12);
}

TEST(LinearBounds, SharedLineThroughOrigin) {
  const EquilibriumReport r = verify_linear_bounds(solved({{1, 0.5}, {1.5, 0.5}}));
  ASSERT_EQ(r.groups.size(), 2u);
  for (const GroupCheck& c : r.groups) {
    EXPECT_NEAR(c.intercept, 0.0, 1e-12);
    EXPECT_NEAR(c.slope, 0.4, 1e-12);
  }
  EXPECT_TRUE(r.pass);
}

TEST(LinearBounds, SeparatedFixtureIntercept) {
  const EquilibriumReport r = verify_linear_bounds(solved({{1, 0.5}, {10, 0.5}}));
  EXPECT_NEAR(r.groups[1].intercept, 0.4375, 1e-12);
  EXPECT_NEAR(r.groups[0].intercept, 0.0, 1e-12);
  EXPECT_TRUE(r.pass);
}

TEST(LinearBounds, SingleGroupChord) {
  const EquilibriumReport r = verify_linear_bounds(solved({{2.5, 1}}));
  EXPECT_NEAR(r.groups[0].intercept, 0.0, 1e-12);
  EXPECT_NEAR(r.groups[0].slope, 1.0 / 5.0, 1e-12);
}

TEST(LinearBounds, SingleAtomUsesTangent) {
  // Atom of 0.1 at 1 on top of a flat 0.45: the line has the aggregate's
  // slope and passes through G(1) = 0.45 + 0.05.
  const EquilibriumSolution sol =
      make_solution({PiecewiseDensity({0, 2}, {0.45}), PiecewiseDensity::point(1.0, 0.1)});
  const EquilibriumReport r = verify_linear_bounds(sol);
  EXPECT_NEAR(r.groups[1].intercept, 0.05, 1e-12);
  EXPECT_NEAR(r.groups[1].slope, 0.45, 1e-12);
}

TEST(LinearBounds, PerturbationFails) { EXPECT_FALSE(verify_linear_bounds(perturbed()).pass); }

TEST(BestDyad, LinearCdfHasNoGain) {
  const DyadDeviation d = best_dyad(1.0, PiecewiseDensity::uniform(0, 2));
  EXPECT_NEAR(d.payoff, 0.5, 1e-12);
  EXPECT_NEAR(d.gain, 0.0, 1e-12);
}

TEST(BestDyad, ConcaveCdfHasNoGain) {
  const DyadDeviation d = best_dyad(10.0, solved({{1, 0.5}, {10, 0.5}}).aggregate);
  EXPECT_NEAR(d.payoff, 0.75, 1e-12);
  EXPECT_NEAR(d.gain, 0.0, 1e-12);
}

TEST(BestDyad, PerturbationGainMatchesEnvelope) {
  const PiecewiseDensity g = perturbed().aggregate;
  const DyadDeviation d = best_dyad(1.0, g);
  // Chord from (0, 0) to (2, 0.45) against G(1) = 0.2.
  EXPECT_NEAR(d.gain, 0.025, 1e-12);
  const double envelope = oracle::concave_envelope(oracle::cdf_samples(g, 20.0, 0.01), 1.0);
  EXPECT_NEAR(d.payoff, envelope, 1e-12);
  EXPECT_NEAR(d.gain, envelope - cdf(g, 1.0).mid(), 1e-12);
}

class BestDyadEnvelope : public ::testing::TestWithParam<int> {};

TEST_P(BestDyadEnvelope, MatchesConcaveEnvelope) {
  std::mt19937_64 rng(9000 + GetParam());
  const PiecewiseDensity g = oracle::random_density(rng, 6, 0, 5.0);
  // Dense grid plus every breakpoint.
  auto pts = oracle::cdf_samples(g, g.breakpoints().back() + 2.0, 0.01);
  for (double x : g.breakpoints()) pts.push_back({x, cdf(g, x).mid()});
  const double hi = std::max(g.support_hi(), 0.0);
  for (int t = 0; t < 5; ++t) {
    const double b = 0.05 + (hi - 0.05) * oracle::uniform01(rng);
    if (b <= 0.0) continue;
    const DyadDeviation d = best_dyad(b, g);
    EXPECT_NEAR(d.payoff, oracle::concave_envelope(pts, b), 1e-12) << b;
  }
}

INSTANTIATE_TEST_SUITE_P(Random, BestDyadEnvelope, ::testing::Range(0, 30));

TEST(SubpopConsistency, SolveOutputPassesEveryPrefix) {
  const DiscreteBudgetDistribution dist({{1, 1}, {1.5, 1}, {10, 1}});
  const auto verdicts = verify_subpop_consistency(dist, solve(dist));
  ASSERT_EQ(verdicts.size(), 3u);
  for (const auto& v : verdicts) EXPECT_TRUE(v.pass) << v.prefix_size;
  EXPECT_DOUBLE_EQ(verdicts[1].threshold, 1.5);
}

TEST(SubpopConsistency, SingleGroup) {
  const DiscreteBudgetDistribution dist({{3, 1}});
  const auto verdicts = verify_subpop_consistency(dist, solve(dist));
  ASSERT_EQ(verdicts.size(), 1u);
  EXPECT_TRUE(verdicts[0].pass);
}

TEST(SubpopConsistency, RewiredEquilibriumFails) {
  const DiscreteBudgetDistribution dist({{1, 1}, {1.5, 1}, {2, 1}});
  const EquilibriumSolution rewired = league_rewire(solve(dist), 0, 1);
  EXPECT_TRUE(verify_nash(rewired).pass);
  bool any_fail = false;
  for (const auto& v : verify_subpop_consistency(dist, rewired)) any_fail = any_fail || !v.pass;
  EXPECT_TRUE(any_fail);
}

TEST(PayoffIdentity, Examples) {
  const EquilibriumSolution sep = solved({{1, 0.5}, {10, 0.5}});
  EXPECT_NEAR(population_payoff(sep.strategies[0].normalized(), sep.aggregate), 0.25, 1e-12);
  EXPECT_NEAR(population_payoff(sep.strategies[1].normalized(), sep.aggregate), 0.75, 1e-12);
  EXPECT_LT(payoff_identity_check(sep).max_deviation, 1e-9);
  EXPECT_TRUE(payoff_identity_check(solved({{4, 1}})).pass);
  const EquilibriumSolution dice =
      dice_to_population({{2, 2, 4, 4, 9, 9}, {1, 1, 6, 6, 8, 8}, {3, 3, 5, 5, 7, 7}});
  const PayoffIdentity p = payoff_identity_check(dice);
  EXPECT_TRUE(p.pass);
  EXPECT_NEAR(cdf(dice.aggregate, 4.5).mid(), 0.5, 1e-12);
}

class NashImpliesConcave : public ::testing::TestWithParam<int> {};

TEST_P(NashImpliesConcave, SlopesNonIncreasingAndNoGain) {
  std::mt19937_64 rng(12000 + GetParam());
  const DiscreteBudgetDistribution dist = oracle::random_distribution(rng, 8, 0.1, 100);
  const EquilibriumSolution sol = solve(dist);
  const EquilibriumReport r = verify_nash(sol);
  ASSERT_TRUE(r.pass);
  const auto xs = sol.aggregate.breakpoints();
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    const double slope = (cdf(sol.aggregate, xs[j + 1]).mid() - cdf(sol.aggregate, xs[j]).mid()) / (xs[j + 1] - xs[j]);
    EXPECT_LE(slope, prev + 1e-9);
    prev = slope;
  }
  for (const auto& g : dist.groups()) EXPECT_LE(best_dyad(g.budget, sol.aggregate).gain, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Random, NashImpliesConcave, ::testing::Range(0, 20));

}  // namespace
