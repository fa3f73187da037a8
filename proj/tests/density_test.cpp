#include <gtest/gtest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "poplotto/density.hpp"
#include "poplotto/solver.hpp"
#include "poplotto/structure.hpp"

namespace {

using namespace poplotto;

TEST(Density, TotalMass) {
  EXPECT_DOUBLE_EQ(total_mass(PiecewiseDensity({0, 2}, {0.5})), 1.0);
  EXPECT_DOUBLE_EQ(total_mass(PiecewiseDensity()), 0.0);
  EXPECT_DOUBLE_EQ(total_mass(PiecewiseDensity({0, 2}, {0.25}, {{0, 0.5}})), 1.0);
}

TEST(Density, Mean) {
  EXPECT_DOUBLE_EQ(mean(PiecewiseDensity::uniform(0, 2)), 1.0);
  EXPECT_DOUBLE_EQ(mean(PiecewiseDensity({0, 2}, {0.25}, {{0, 0.5}})), 0.5);
  // Second group of the (1, 1.5) fixture, as a conditional mean.
  EXPECT_NEAR(mean(PiecewiseDensity({0, 2, 2.5}, {0.15, 0.4})), 1.5, 1e-12);
  EXPECT_THROW(mean(PiecewiseDensity()), std::domain_error);
}

TEST(Density, Cdf) {
  const CdfValue u = cdf(PiecewiseDensity::uniform(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(u.below, 0.5);
  EXPECT_DOUBLE_EQ(u.at, 0.0);

  const CdfValue a = cdf(PiecewiseDensity::point(3.0), 3.0);
  EXPECT_DOUBLE_EQ(a.below, 0.0);
  EXPECT_DOUBLE_EQ(a.at, 1.0);
  EXPECT_DOUBLE_EQ(a.mid(), 0.5);

  const EquilibriumSolution sol = solve(DiscreteBudgetDistribution({{1, 0.5}, {1.5, 0.5}}));
  const CdfValue g = cdf(sol.aggregate, 2.5);
  EXPECT_NEAR(g.below, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(g.at, 0.0);
}

TEST(Density, MixtureOfDiceIsUniform) {
  const EquilibriumSolution dice = dice_to_population({{2, 2, 4, 4, 9, 9}, {1, 1, 6, 6, 8, 8}, {3, 3, 5, 5, 7, 7}});
  std::vector<MixturePart> parts;
  for (const auto& f : dice.strategies) parts.push_back({1.0, f});
  const PiecewiseDensity g = mixture(parts);
  EXPECT_NEAR(total_mass(g), 1.0, 1e-12);
  for (double x = 0.05; x < 9.0; x += 0.1) EXPECT_NEAR(g.density_at(x), 1.0 / 9.0, 1e-12) << x;
  EXPECT_EQ(g.density_at(9.5), 0.0);
}

TEST(Density, MixtureIdentity) {
  const PiecewiseDensity d({0, 1, 3}, {0.2, 0.3}, {{1.5, 0.2}});
  const std::vector<MixturePart> parts{{1.0, d}};
  const PiecewiseDensity m = mixture(parts);
  EXPECT_EQ(std::vector<double>(m.breakpoints().begin(), m.breakpoints().end()),
            std::vector<double>(d.breakpoints().begin(), d.breakpoints().end()));
  EXPECT_EQ(std::vector<double>(m.heights().begin(), m.heights().end()),
            std::vector<double>(d.heights().begin(), d.heights().end()));
  EXPECT_EQ(mean(m), mean(d));
}

TEST(Density, MixtureOfSeparatedFixture) {
  const std::vector<MixturePart> parts{{0.5, PiecewiseDensity::uniform(0, 2)},
                                       {0.5, PiecewiseDensity::uniform(2, 18)}};
  const PiecewiseDensity g = mixture(parts);
  EXPECT_DOUBLE_EQ(g.density_at(1.0), 0.25);
  EXPECT_DOUBLE_EQ(g.density_at(10.0), 1.0 / 32.0);
}

TEST(Density, MergesNearBreakpointsAndAtoms) {
  const PiecewiseDensity d({0, 1, 1 + 1e-12, 2}, {0.5, 7.0, 0.5}, {{0.5, 0.1}, {0.5 + 1e-12, 0.1}});
  EXPECT_EQ(d.segment_count(), 2u);
  ASSERT_EQ(d.atoms().size(), 1u);
  EXPECT_DOUBLE_EQ(d.atoms()[0].mass, 0.2);
}

TEST(Density, RejectsInvalid) {
  EXPECT_THROW(PiecewiseDensity({0, 1}, {-0.5}), std::invalid_argument);
  EXPECT_THROW(PiecewiseDensity({1, 0}, {0.5}), std::invalid_argument);
  EXPECT_THROW(PiecewiseDensity({0, 1, 2}, {0.5}), std::invalid_argument);
  EXPECT_THROW(PiecewiseDensity({-1, 1}, {0.5}), std::invalid_argument);
}

TEST(Density, LeftSegmentOnBreakpoint) {
  const PiecewiseDensity d({0, 2, 18}, {0.25, 1.0 / 32});
  EXPECT_DOUBLE_EQ(d.density_at(2.0), 1.0 / 32);
  EXPECT_DOUBLE_EQ(d.density_left_of(2.0), 0.25);
  EXPECT_DOUBLE_EQ(d.density_left_of(1.0), 0.25);
}

TEST(Density, BlockAddition) {
  const PiecewiseDensity d = PiecewiseDensity::uniform(0, 4, 1.0).with_block_added(1, 2, -0.25);
  EXPECT_NEAR(total_mass(d), 0.75, 1e-15);
  EXPECT_DOUBLE_EQ(d.density_at(1.5), 0.0);
  EXPECT_THROW(d.with_block_added(1, 2, -0.1), std::invalid_argument);
}

class DensityProperties : public ::testing::TestWithParam<int> {};

TEST_P(DensityProperties, CdfMonotoneAndMassConserving) {
  std::mt19937_64 rng(1000 + GetParam());
  std::vector<MixturePart> parts;
  double expected = 0.0;
  for (int p = 0; p < 3; ++p) {
    const double w = oracle::uniform01(rng);
    parts.push_back({w, oracle::random_density(rng, 5, 2, 10.0)});
    expected += w;
  }
  const PiecewiseDensity m = mixture(parts);
  EXPECT_NEAR(total_mass(m), expected, 1e-12);

  double prev_through = 0.0;
  for (double x = 0.0; x <= 11.0; x += 0.037) {
    const CdfValue c = cdf(m, x);
    EXPECT_GE(c.below + 1e-12, prev_through);
    EXPECT_GE(c.at, 0.0);
    prev_through = c.through();
  }
  for (const Atom& a : m.atoms()) {
    const CdfValue c = cdf(m, a.location);
    EXPECT_LE(c.through(), cdf(m, a.location + 1e-6).below + 1e-12);
  }
  EXPECT_NEAR(cdf(m, m.breakpoints().back() + 20.0).through(), total_mass(m), 1e-12);

  const PiecewiseDensity d = parts.front().density;
  const std::vector<MixturePart> single{{1.0, d}};
  EXPECT_EQ(mean(mixture(single)), mean(d));
}

INSTANTIATE_TEST_SUITE_P(Random, DensityProperties, ::testing::Range(0, 25));

}  // namespace
