#pragma once

// Reference computations used by the tests. None of them reuse the
// library's evaluation code: sampling, hulls and dice counting are done from
// scratch on top of the raw breakpoints, heights and atoms.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "poplotto/density.hpp"
#include "poplotto/solver.hpp"

namespace oracle {

double uniform01(std::mt19937_64& rng);

// One draw from a unit-mass density.
double sample(const poplotto::PiecewiseDensity& d, std::mt19937_64& rng);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// P(X > Y) + P(X = Y) / 2 from independent samples.
Estimate monte_carlo_win_prob(const poplotto::PiecewiseDensity& f, const poplotto::PiecewiseDensity& h,
                              int samples, std::uint64_t seed);

// Upper concave envelope of the points, evaluated at x. Points need not be
// sorted.
double concave_envelope(std::vector<std::array<double, 2>> points, double x);

// Midpoint CDF of a density sampled at 0, every multiple of `step` up to
// `hi`, and at every atom location.
std::vector<std::array<double, 2>> cdf_samples(const poplotto::PiecewiseDensity& d, double hi, double step);

// Random unit-mass step density with up to `pieces` segments on [0, span]
// and up to `atoms` atoms.
poplotto::PiecewiseDensity random_density(std::mt19937_64& rng, int pieces, int atoms, double span);

// n groups, budgets log-uniform in [lo, hi] and flat Dirichlet masses.
poplotto::DiscreteBudgetDistribution random_distribution(std::mt19937_64& rng, int n, double lo, double hi);

using Die = std::array<int, 6>;

// P(a > b) for fair six-sided dice, as a count out of 36.
int beats(const Die& a, const Die& b);

// Exhaustive search for three six-sided dice with faces 1..9, 30 pips each,
// every value used exactly twice in total and no value shared between
// dice, that beat each other in a cycle with probability 5/9. Returns the
// lexicographically first such triple.
std::optional<std::array<Die, 3>> search_nontransitive_dice();

}  // namespace oracle
