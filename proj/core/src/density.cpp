#include "poplotto/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace poplotto {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("non-finite ") + what);
  }
}

// Sorted union of the breakpoint sets; duplicates are removed exactly and
// near-duplicates are left for the constructor to merge.
std::vector<double> union_breakpoints(std::span<const MixturePart> parts) {
  std::vector<double> xs;
  for (const auto& part : parts) {
    auto bps = part.density.breakpoints();
    xs.insert(xs.end(), bps.begin(), bps.end());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

PiecewiseDensity combine(std::span<const MixturePart> parts) {
  std::vector<double> xs = union_breakpoints(parts);
  std::vector<double> heights;
  if (xs.size() >= 2) {
    heights.reserve(xs.size() - 1);
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
      const double mid = 0.5 * (xs[j] + xs[j + 1]);
      double h = 0.0;
      for (const auto& part : parts) h += part.weight * part.density.density_at(mid);
      heights.push_back(h);
    }
  } else {
    xs.clear();
  }
  std::vector<Atom> atoms;
  for (const auto& part : parts) {
    for (const Atom& a : part.density.atoms()) {
      atoms.push_back({a.location, part.weight * a.mass});
    }
  }
  return PiecewiseDensity(std::move(xs), std::move(heights), std::move(atoms));
}

}  // namespace

PiecewiseDensity::PiecewiseDensity(std::vector<double> breakpoints,
                                   std::vector<double> heights,
                                   std::vector<Atom> atoms) {
  if (breakpoints.empty()) {
    if (!heights.empty()) throw std::invalid_argument("heights without breakpoints");
  } else if (breakpoints.size() != heights.size() + 1) {
    throw std::invalid_argument("need exactly one more breakpoint than heights");
  }

  if (!breakpoints.empty()) {
    require_finite(breakpoints.front(), "breakpoint");
    if (breakpoints.front() < -kTolerance) {
      throw std::invalid_argument("breakpoints must be non-negative");
    }
    breakpoints_.push_back(std::max(0.0, breakpoints.front()));
    for (std::size_t j = 1; j < breakpoints.size(); ++j) {
      const double x = breakpoints[j];
      double h = heights[j - 1];
      require_finite(x, "breakpoint");
      require_finite(h, "height");
      if (h < -kTolerance) throw std::invalid_argument("negative density height");
      if (h < 0.0) h = 0.0;
      const double last = breakpoints_.back();
      if (x < last - kTolerance) throw std::invalid_argument("breakpoints must increase");
      if (x - last < kTolerance) continue;  // zero-width segment
      breakpoints_.push_back(x);
      heights_.push_back(h);
    }
    if (heights_.empty()) breakpoints_.clear();
  }

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (Atom a : atoms) {
    require_finite(a.location, "atom location");
    require_finite(a.mass, "atom mass");
    if (a.location < -kTolerance) throw std::invalid_argument("atom at negative location");
    if (a.mass < -kTolerance) throw std::invalid_argument("negative atom mass");
    if (a.mass <= 0.0) continue;
    a.location = std::max(0.0, a.location);
    if (!atoms_.empty() && a.location - atoms_.back().location < kTolerance) {
      atoms_.back().mass += a.mass;
    } else {
      atoms_.push_back(a);
    }
  }

  cumulative_.assign(breakpoints_.size(), 0.0);
  for (std::size_t j = 0; j < heights_.size(); ++j) {
    cumulative_[j + 1] = cumulative_[j] + heights_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
  }
}

PiecewiseDensity PiecewiseDensity::uniform(double lo, double hi, double mass) {
  if (!(hi > lo)) throw std::invalid_argument("uniform needs lo < hi");
  return PiecewiseDensity({lo, hi}, {mass / (hi - lo)});
}

PiecewiseDensity PiecewiseDensity::point(double location, double mass) {
  return PiecewiseDensity({}, {}, {{location, mass}});
}

double PiecewiseDensity::continuous_mass() const {
  return cumulative_.empty() ? 0.0 : cumulative_.back();
}

double PiecewiseDensity::continuous_cdf(double x) const {
  if (heights_.empty() || x <= breakpoints_.front()) return 0.0;
  if (x >= breakpoints_.back()) return cumulative_.back();
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto j = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return cumulative_[j] + heights_[j] * (x - breakpoints_[j]);
}

double PiecewiseDensity::density_at(double x) const {
  if (heights_.empty() || x < breakpoints_.front() || x >= breakpoints_.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return heights_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double PiecewiseDensity::density_left_of(double x) const {
  if (heights_.empty()) return 0.0;
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x - kTolerance);
  if (it != breakpoints_.end() && *it <= x + kTolerance) {
    const auto k = static_cast<std::size_t>(it - breakpoints_.begin());
    return k == 0 ? 0.0 : heights_[k - 1];
  }
  return density_at(x);
}

double PiecewiseDensity::support_lo() const {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < heights_.size(); ++j) {
    if (heights_[j] > kTolerance) {
      lo = breakpoints_[j];
      break;
    }
  }
  if (!atoms_.empty()) lo = std::min(lo, atoms_.front().location);
  return std::isfinite(lo) ? lo : 0.0;
}

double PiecewiseDensity::support_hi() const {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t j = heights_.size(); j-- > 0;) {
    if (heights_[j] > kTolerance) {
      hi = breakpoints_[j + 1];
      break;
    }
  }
  if (!atoms_.empty()) hi = std::max(hi, atoms_.back().location);
  return std::isfinite(hi) ? hi : 0.0;
}

PiecewiseDensity PiecewiseDensity::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("scale factor must be finite and non-negative");
  }
  std::vector<double> hs(heights_);
  for (double& h : hs) h *= factor;
  std::vector<Atom> as(atoms_);
  for (Atom& a : as) a.mass *= factor;
  return PiecewiseDensity(breakpoints_, std::move(hs), std::move(as));
}

PiecewiseDensity PiecewiseDensity::normalized() const {
  const double m = total_mass(*this);
  if (!(m > 0.0)) throw std::domain_error("cannot normalize a zero-mass density");
  return scaled(1.0 / m);
}

PiecewiseDensity PiecewiseDensity::with_block_added(double lo, double hi, double height) const {
  if (!(hi > lo)) throw std::invalid_argument("block needs lo < hi");
  std::vector<double> xs(breakpoints_);
  xs.push_back(lo);
  xs.push_back(hi);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> hs;
  hs.reserve(xs.size() - 1);
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    const double mid = 0.5 * (xs[j] + xs[j + 1]);
    hs.push_back(density_at(mid) + (mid >= lo && mid < hi ? height : 0.0));
  }
  return PiecewiseDensity(std::move(xs), std::move(hs), atoms_);
}

double total_mass(const PiecewiseDensity& d) {
  double m = d.continuous_mass();
  for (const Atom& a : d.atoms()) m += a.mass;
  return m;
}

double mean(const PiecewiseDensity& d) {
  const double m = total_mass(d);
  if (!(m > 0.0)) throw std::domain_error("mean of a zero-mass density");
  const auto xs = d.breakpoints();
  const auto hs = d.heights();
  double moment = 0.0;
  for (std::size_t j = 0; j < hs.size(); ++j) {
    moment += hs[j] * (xs[j + 1] - xs[j]) * 0.5 * (xs[j] + xs[j + 1]);
  }
  for (const Atom& a : d.atoms()) moment += a.location * a.mass;
  return moment / m;
}

CdfValue cdf(const PiecewiseDensity& d, double x) {
  CdfValue v{d.continuous_cdf(x), 0.0};
  for (const Atom& a : d.atoms()) {
    if (std::abs(a.location - x) < kTolerance) {
      v.at += a.mass;
    } else if (a.location < x) {
      v.below += a.mass;
    }
  }
  return v;
}

PiecewiseDensity mixture(std::span<const MixturePart> parts) {
  for (const auto& part : parts) {
    if (!(part.weight >= 0.0)) throw std::invalid_argument("mixture weights must be non-negative");
  }
  return combine(parts);
}

PiecewiseDensity mixture(std::span<const PiecewiseDensity> parts) {
  std::vector<MixturePart> weighted;
  weighted.reserve(parts.size());
  for (const auto& d : parts) weighted.push_back({1.0, d});
  return combine(weighted);
}

}  // namespace poplotto
