#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "poplotto/density.hpp"

namespace poplotto {

struct BudgetGroup {
  double budget = 0.0;
  double mass = 0.0;
};

// A population made of finitely many groups, each with a common budget.
// Budgets are strictly increasing and masses positive, summing to one.
class DiscreteBudgetDistribution {
 public:
  // Validates and normalizes masses to sum to one. Throws
  // std::invalid_argument on empty input, non-positive values or budgets
  // that are not strictly increasing.
  explicit DiscreteBudgetDistribution(std::vector<BudgetGroup> groups);

  std::span<const BudgetGroup> groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  const BudgetGroup& operator[](std::size_t i) const { return groups_[i]; }

  // First `count` groups, renormalized.
  DiscreteBudgetDistribution prefix(std::size_t count) const;

  // Sum of the masses as given, before normalization.
  double input_mass() const { return input_mass_; }

 private:
  std::vector<BudgetGroup> groups_;
  double input_mass_ = 1.0;
};

// Incremental step representation of the aggregate density: heights[j] is
// the density on [boundaries[j-1], boundaries[j]). heights[0] is an
// unbounded sentinel so that "y < heights[0]" always holds.
struct TerraceProfile {
  std::vector<double> boundaries{0.0};
  std::vector<double> heights{kUnbounded};

  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  std::size_t terrace_count() const { return boundaries.size() - 1; }
  PiecewiseDensity density() const;
};

struct FillResult {
  TerraceProfile profile;
  PiecewiseDensity strategy;
};

// Right wall position and new terrace height for a block of mass k and mean
// beta poured over the terrace [x2, x1] of height y1 and beyond it.
struct QuadraticFill {
  double p = 0.0;
  double y = 0.0;
};

// Numerical failure inside the fill recursion.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t group)
      : std::runtime_error(what), group_(group) {}
  std::size_t group() const { return group_; }

 private:
  std::size_t group_;
};

QuadraticFill quadratic_fill(double x2, double x1, double y1, double k, double beta);

// Pours a new group of mass k and mean beta onto the profile. beta must
// exceed every budget already poured.
FillResult fill(const TerraceProfile& profile, double beta, double k);

struct EquilibriumSolution {
  // One per group, carrying the group's mass (not normalized).
  std::vector<PiecewiseDensity> strategies;
  // Sum of the strategies; unit mass.
  PiecewiseDensity aggregate;
};

// Sub-population consistent equilibrium for a discrete budget
// distribution. Throws SolverError carrying the offending group index.
EquilibriumSolution solve(const DiscreteBudgetDistribution& dist);

// Solution whose aggregate is the plain sum of the given strategies.
EquilibriumSolution make_solution(std::vector<PiecewiseDensity> strategies);

}  // namespace poplotto
