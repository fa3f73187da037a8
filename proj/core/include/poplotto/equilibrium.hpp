#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "poplotto/density.hpp"
#include "poplotto/payoff.hpp"
#include "poplotto/solver.hpp"

namespace poplotto {

struct GroupCheck {
  double budget = 0.0;     // conditional mean of the strategy
  double intercept = 0.0;  // A_i of the supporting line
  double payoff = 0.0;     // H(f_i) against the aggregate
  double slope = 0.0;      // (H_i - A_i) / b_i
  double bound_violation = 0.0;
  double flat_violation = 0.0;
};

struct DyadDeviation {
  Dyad dyad;
  double payoff = 0.0;
  // Payoff minus the CDF value at the budget, i.e. what the best dyad gains
  // over sitting on the aggregate's chord.
  double gain = 0.0;
};

struct EquilibriumReport {
  std::vector<GroupCheck> groups;
  double monotone_violation = 0.0;
  double mixture_violation = 0.0;
  double g_at_zero = 0.0;
  std::optional<DyadDeviation> best_deviation;
  std::size_t best_deviation_group = 0;
  double tolerance = kTolerance;
  bool pass = false;

  // Largest recorded violation of any kind.
  double worst_violation() const;
};

// Checks that the aggregate density is non-increasing, constant on the hull
// of every strategy's support, and puts no mass at zero. The best dyad
// deviation per group is recorded for information but does not enter the
// verdict.
EquilibriumReport verify_nash(const EquilibriumSolution& sol, double tol = kTolerance);

// For each group, builds the line through the aggregate CDF at the ends of
// the support hull and checks G <= line everywhere with equality on the
// support.
EquilibriumReport verify_linear_bounds(const EquilibriumSolution& sol, double tol = kTolerance);

// Best dyad with budget b over the aggregate's breakpoints, atoms, 0 and a
// point beyond the support. Exact for piecewise-linear CDFs.
DyadDeviation best_dyad(double b, const PiecewiseDensity& aggregate);

struct PrefixVerdict {
  std::size_t prefix_size = 0;
  double threshold = 0.0;
  bool pass = false;
  EquilibriumReport report;
};

// Runs verify_nash on every renormalized prefix {f_1..f_j}.
std::vector<PrefixVerdict> verify_subpop_consistency(const DiscreteBudgetDistribution& dist,
                                                     const EquilibriumSolution& sol,
                                                     double tol = kTolerance);

struct PayoffIdentity {
  double max_deviation = 0.0;
  bool pass = false;
};

// max_i |H(f_i) - G(b_i)|.
PayoffIdentity payoff_identity_check(const EquilibriumSolution& sol, double tol = kTolerance);

}  // namespace poplotto
