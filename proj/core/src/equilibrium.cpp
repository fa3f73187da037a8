#include "poplotto/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace poplotto {
namespace {

PiecewiseDensity unit_aggregate(const EquilibriumSolution& sol) {
  if (sol.strategies.empty()) throw std::invalid_argument("solution has no strategies");
  PiecewiseDensity agg = mixture(std::span<const PiecewiseDensity>(sol.strategies));
  if (std::abs(total_mass(agg) - 1.0) > kTolerance) {
    throw std::invalid_argument("strategies must sum to unit mass");
  }
  return agg;
}

// Largest pointwise difference between two measures: density gap on every
// cell of the breakpoint union plus atom mass gaps.
double measure_gap(const PiecewiseDensity& a, const PiecewiseDensity& b) {
  std::vector<double> xs(a.breakpoints().begin(), a.breakpoints().end());
  xs.insert(xs.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(xs.begin(), xs.end());
  double gap = 0.0;
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    if (xs[j + 1] - xs[j] < kTolerance) continue;
    const double mid = 0.5 * (xs[j] + xs[j + 1]);
    gap = std::max(gap, std::abs(a.density_at(mid) - b.density_at(mid)));
  }
  for (const Atom& at : a.atoms()) {
    gap = std::max(gap, std::abs(cdf(a, at.location).at - cdf(b, at.location).at));
  }
  for (const Atom& at : b.atoms()) {
    gap = std::max(gap, std::abs(cdf(a, at.location).at - cdf(b, at.location).at));
  }
  return gap;
}

// Amount by which g rises anywhere. An atom away from zero is an infinite
// spike; its mass is reported as the magnitude.
double monotone_violation(const PiecewiseDensity& g) {
  double v = 0.0;
  const auto xs = g.breakpoints();
  const auto hs = g.heights();
  double prev = (!xs.empty() && xs.front() > kTolerance) ? 0.0 : std::numeric_limits<double>::infinity();
  for (double h : hs) {
    v = std::max(v, h - prev);
    prev = h;
  }
  for (const Atom& a : g.atoms()) {
    if (a.location > kTolerance) v = std::max(v, a.mass);
  }
  return v;
}

// Spread of g's height over [lo, hi]; atoms inside count at full mass.
double flat_violation(const PiecewiseDensity& g, double lo, double hi) {
  double v = 0.0;
  if (hi - lo > kTolerance) {
    const auto xs = g.breakpoints();
    const auto hs = g.heights();
    double h_min = std::numeric_limits<double>::infinity();
    double h_max = -std::numeric_limits<double>::infinity();
    double covered = 0.0;
    for (std::size_t j = 0; j < hs.size(); ++j) {
      const double overlap = std::min(hi, xs[j + 1]) - std::max(lo, xs[j]);
      if (overlap <= kTolerance) continue;
      covered += overlap;
      h_min = std::min(h_min, hs[j]);
      h_max = std::max(h_max, hs[j]);
    }
    if (covered < (hi - lo) - kTolerance) h_min = 0.0;  // part of the hull has no density
    if (std::isfinite(h_max)) v = h_max - h_min;
  }
  for (const Atom& a : g.atoms()) {
    if (a.location >= lo - kTolerance && a.location <= hi + kTolerance && hi - lo > kTolerance) {
      v = std::max(v, a.mass);
    }
  }
  return v;
}

double cdf_mid(const PiecewiseDensity& g, double x) { return cdf(g, x).mid(); }

GroupCheck check_group(const PiecewiseDensity& f, const PiecewiseDensity& agg) {
  GroupCheck c;
  const PiecewiseDensity unit = f.normalized();
  c.budget = mean(f);
  c.payoff = population_payoff(unit, agg);
  const double lo = f.support_lo();
  const double hi = f.support_hi();
  c.flat_violation = flat_violation(agg, lo, hi);

  if (hi - lo > kTolerance) {
    c.intercept = (hi * cdf_mid(agg, lo) - lo * cdf_mid(agg, hi)) / (hi - lo);
  } else {
    double s = agg.density_at(lo);
    if (s == 0.0) s = agg.density_left_of(lo);
    c.intercept = cdf_mid(agg, lo) - s * lo;
  }
  c.slope = (c.payoff - c.intercept) / c.budget;
  const auto line = [&](double x) { return c.slope * x + c.intercept; };

  double bound = 0.0;
  std::vector<double> probes{0.0, lo, hi};
  probes.insert(probes.end(), agg.breakpoints().begin(), agg.breakpoints().end());
  for (const Atom& a : agg.atoms()) probes.push_back(a.location);
  for (double x : probes) {
    const CdfValue v = cdf(agg, x);
    bound = std::max({bound, v.below - line(x), v.through() - line(x)});
  }

  std::vector<double> on_support{c.budget};
  const auto xs = f.breakpoints();
  const auto hs = f.heights();
  for (std::size_t j = 0; j < hs.size(); ++j) {
    if (hs[j] > kTolerance) {
      on_support.push_back(xs[j]);
      on_support.push_back(xs[j + 1]);
    }
  }
  for (const Atom& a : f.atoms()) on_support.push_back(a.location);
  for (double x : on_support) bound = std::max(bound, std::abs(cdf_mid(agg, x) - line(x)));
  c.bound_violation = bound;
  return c;
}

struct Common {
  PiecewiseDensity agg;
  EquilibriumReport report;
};

Common common_checks(const EquilibriumSolution& sol, double tol) {
  Common out{unit_aggregate(sol), {}};
  auto& rep = out.report;
  rep.tolerance = tol;
  rep.mixture_violation = sol.aggregate.empty() ? 0.0 : measure_gap(out.agg, sol.aggregate);
  rep.monotone_violation = monotone_violation(out.agg);
  rep.g_at_zero = cdf(out.agg, 0.0).through();
  for (std::size_t i = 0; i < sol.strategies.size(); ++i) {
    rep.groups.push_back(check_group(sol.strategies[i], out.agg));
    const DyadDeviation d = best_dyad(rep.groups.back().budget, out.agg);
    if (!rep.best_deviation || d.gain > rep.best_deviation->gain) {
      rep.best_deviation = d;
      rep.best_deviation_group = i;
    }
  }
  return out;
}

}  // namespace

double EquilibriumReport::worst_violation() const {
  double v = std::max({monotone_violation, mixture_violation, g_at_zero});
  for (const auto& g : groups) v = std::max({v, g.flat_violation, g.bound_violation});
  return v;
}

EquilibriumReport verify_nash(const EquilibriumSolution& sol, double tol) {
  EquilibriumReport rep = common_checks(sol, tol).report;
  bool ok = rep.monotone_violation <= tol && rep.mixture_violation <= tol && rep.g_at_zero <= tol;
  for (const auto& g : rep.groups) ok = ok && g.flat_violation <= tol;
  rep.pass = ok;
  return rep;
}

EquilibriumReport verify_linear_bounds(const EquilibriumSolution& sol, double tol) {
  EquilibriumReport rep = common_checks(sol, tol).report;
  bool ok = rep.mixture_violation <= tol;
  for (const auto& g : rep.groups) ok = ok && g.bound_violation <= tol;
  rep.pass = ok;
  return rep;
}

DyadDeviation best_dyad(double b, const PiecewiseDensity& aggregate) {
  if (!(b > 0.0)) throw std::invalid_argument("best_dyad needs a positive budget");
  std::vector<double> xs{0.0};
  xs.insert(xs.end(), aggregate.breakpoints().begin(), aggregate.breakpoints().end());
  for (const Atom& a : aggregate.atoms()) xs.push_back(a.location);
  xs.push_back(std::max(aggregate.support_hi(), b) + 1.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> values(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) values[i] = cdf_mid(aggregate, xs[i]);

  const auto split = std::lower_bound(xs.begin(), xs.end(), b) - xs.begin();
  auto above = std::upper_bound(xs.begin(), xs.end(), b) - xs.begin();
  std::optional<DyadDeviation> best;
  for (std::ptrdiff_t i = 0; i < split; ++i) {
    for (auto j = above; j < static_cast<std::ptrdiff_t>(xs.size()); ++j) {
      const Dyad d = Dyad::make(xs[i], xs[j], b);
      const double pay = d.lambda * values[i] + (1.0 - d.lambda) * values[j];
      if (!best || pay > best->payoff) best = DyadDeviation{d, pay, 0.0};
    }
  }
  best->gain = best->payoff - cdf_mid(aggregate, b);
  return *best;
}

std::vector<PrefixVerdict> verify_subpop_consistency(const DiscreteBudgetDistribution& dist,
                                                     const EquilibriumSolution& sol, double tol) {
  if (dist.size() != sol.strategies.size()) {
    throw std::invalid_argument("distribution and solution sizes differ");
  }
  std::vector<PrefixVerdict> out;
  double prefix_mass = 0.0;
  for (std::size_t j = 1; j <= dist.size(); ++j) {
    prefix_mass += total_mass(sol.strategies[j - 1]);
    std::vector<PiecewiseDensity> scaled;
    scaled.reserve(j);
    for (std::size_t i = 0; i < j; ++i) scaled.push_back(sol.strategies[i].scaled(1.0 / prefix_mass));
    PrefixVerdict v;
    v.prefix_size = j;
    v.threshold = dist[j - 1].budget;
    v.report = verify_nash(make_solution(std::move(scaled)), tol);
    v.pass = v.report.pass;
    out.push_back(std::move(v));
  }
  return out;
}

PayoffIdentity payoff_identity_check(const EquilibriumSolution& sol, double tol) {
  const PiecewiseDensity agg = unit_aggregate(sol);
  PayoffIdentity out;
  for (const auto& f : sol.strategies) {
    const double h = population_payoff(f.normalized(), agg);
    out.max_deviation = std::max(out.max_deviation, std::abs(h - cdf_mid(agg, mean(f))));
  }
  out.pass = out.max_deviation <= tol;
  return out;
}

}  // namespace poplotto
