#pragma once

#include "poplotto/density.hpp"

namespace poplotto {

// Two-atom strategy: mass lambda at x1 and 1 - lambda at x2 with mean b.
struct Dyad {
  double x1 = 0.0;
  double x2 = 0.0;
  double b = 0.0;
  double lambda = 0.0;

  // Throws std::invalid_argument unless 0 <= x1 < b < x2.
  static Dyad make(double x1, double x2, double b);

  PiecewiseDensity as_density() const;
};

// P(X_f > X_h) + 1/2 P(X_f = X_h) for independent draws. Both inputs must
// carry unit mass (within kTolerance), otherwise std::invalid_argument.
//
// Evaluated exactly on the union of breakpoints: the continuous CDF of h is
// linear on each cell, so every cell contributes a trapezoid; atoms pair off
// against the continuous CDFs and against each other (ties count half).
double win_prob(const PiecewiseDensity& f, const PiecewiseDensity& h);

// lambda * G(x1) + (1 - lambda) * G(x2), with G taken at the tie midpoint
// (below + at / 2) so a dyad atom landing on an aggregate atom splits ties.
double dyad_payoff(const Dyad& chi, const PiecewiseDensity& aggregate);

// Expected payoff of strategy f against the population aggregate g.
double population_payoff(const PiecewiseDensity& f, const PiecewiseDensity& aggregate);

}  // namespace poplotto
