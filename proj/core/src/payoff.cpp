#include "poplotto/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace poplotto {
namespace {

void require_unit_mass(const PiecewiseDensity& d, const char* which) {
  if (std::abs(total_mass(d) - 1.0) > kTolerance) {
    throw std::invalid_argument(std::string(which) + " must have unit mass");
  }
}

// Integral of f_c(x) * H_c(x) over the union cells.
double continuous_vs_continuous(const PiecewiseDensity& f, const PiecewiseDensity& h) {
  std::vector<double> xs(f.breakpoints().begin(), f.breakpoints().end());
  xs.insert(xs.end(), h.breakpoints().begin(), h.breakpoints().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    const double lo = xs[j];
    const double hi = xs[j + 1];
    const double fh = f.density_at(0.5 * (lo + hi));
    if (fh == 0.0) continue;
    total += fh * (hi - lo) * 0.5 * (h.continuous_cdf(lo) + h.continuous_cdf(hi));
  }
  return total;
}

}  // namespace

Dyad Dyad::make(double x1, double x2, double b) {
  if (!(0.0 <= x1 && x1 < b && b < x2)) {
    throw std::invalid_argument("dyad requires 0 <= x1 < b < x2");
  }
  return Dyad{x1, x2, b, (x2 - b) / (x2 - x1)};
}

PiecewiseDensity Dyad::as_density() const {
  return PiecewiseDensity({}, {}, {{x1, lambda}, {x2, 1.0 - lambda}});
}

double win_prob(const PiecewiseDensity& f, const PiecewiseDensity& h) {
  require_unit_mass(f, "first density");
  require_unit_mass(h, "second density");

  // Separated supports decide the match outright; returning the exact
  // constant keeps probability-one outcomes exact.
  const bool f_atom_hi = !f.atoms().empty() && f.atoms().back().location == f.support_hi();
  const bool h_atom_lo = !h.atoms().empty() && h.atoms().front().location == h.support_lo();
  if (f.support_hi() <= h.support_lo() && !(f_atom_hi && h_atom_lo &&
                                           std::abs(f.support_hi() - h.support_lo()) < kTolerance)) {
    return 0.0;
  }
  const bool h_atom_hi = !h.atoms().empty() && h.atoms().back().location == h.support_hi();
  const bool f_atom_lo = !f.atoms().empty() && f.atoms().front().location == f.support_lo();
  if (h.support_hi() <= f.support_lo() && !(h_atom_hi && f_atom_lo &&
                                           std::abs(h.support_hi() - f.support_lo()) < kTolerance)) {
    return 1.0;
  }

  double p = continuous_vs_continuous(f, h);
  const double f_cont = f.continuous_mass();
  for (const Atom& a : h.atoms()) {
    p += a.mass * (f_cont - f.continuous_cdf(a.location));
  }
  for (const Atom& a : f.atoms()) {
    p += a.mass * h.continuous_cdf(a.location);
  }
  for (const Atom& a : f.atoms()) {
    for (const Atom& b : h.atoms()) {
      if (std::abs(a.location - b.location) < kTolerance) {
        p += 0.5 * a.mass * b.mass;
      } else if (a.location > b.location) {
        p += a.mass * b.mass;
      }
    }
  }
  return p;
}

double dyad_payoff(const Dyad& chi, const PiecewiseDensity& aggregate) {
  return chi.lambda * cdf(aggregate, chi.x1).mid() +
         (1.0 - chi.lambda) * cdf(aggregate, chi.x2).mid();
}

double population_payoff(const PiecewiseDensity& f, const PiecewiseDensity& aggregate) {
  return win_prob(f, aggregate);
}

}  // namespace poplotto
