#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

using poplotto::Atom;
using poplotto::PiecewiseDensity;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sample(const PiecewiseDensity& d, std::mt19937_64& rng) {
  const auto xs = d.breakpoints();
  const auto hs = d.heights();
  double u = uniform01(rng);
  for (std::size_t j = 0; j < hs.size(); ++j) {
    const double m = hs[j] * (xs[j + 1] - xs[j]);
    if (u < m) return xs[j] + (xs[j + 1] - xs[j]) * (u / m);
    u -= m;
  }
  for (const Atom& a : d.atoms()) {
    if (u < a.mass) return a.location;
    u -= a.mass;
  }
  // Rounding leftovers land on the last piece.
  if (!d.atoms().empty()) return d.atoms().back().location;
  return xs.back();
}

Estimate monte_carlo_win_prob(const PiecewiseDensity& f, const PiecewiseDensity& h, int samples,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x = sample(f, rng);
    const double y = sample(h, rng);
    const double v = x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    sum += v;
    sum_sq += v * v;
  }
  const double n = samples;
  const double m = sum / n;
  const double var = std::max(0.0, sum_sq / n - m * m);
  return {m, std::sqrt(var / n)};
}

double concave_envelope(std::vector<std::array<double, 2>> points, double x) {
  std::sort(points.begin(), points.end());
  std::vector<std::array<double, 2>> hull;
  for (const auto& p : points) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b when it lies on or below the segment a -> p.
      const double cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    if (x >= hull[k][0] && x <= hull[k + 1][0]) {
      const double t = (x - hull[k][0]) / (hull[k + 1][0] - hull[k][0]);
      return hull[k][1] + t * (hull[k + 1][1] - hull[k][1]);
    }
  }
  return hull.back()[1];
}

std::vector<std::array<double, 2>> cdf_samples(const PiecewiseDensity& d, double hi, double step) {
  std::vector<std::array<double, 2>> out;
  const auto steps = static_cast<long>(std::ceil(hi / step));
  for (long s = 0; s <= steps; ++s) {
    const double x = s * step;
    out.push_back({x, poplotto::cdf(d, x).mid()});
  }
  for (const Atom& a : d.atoms()) out.push_back({a.location, poplotto::cdf(d, a.location).mid()});
  return out;
}

PiecewiseDensity random_density(std::mt19937_64& rng, int pieces, int atoms, double span) {
  const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(pieces));
  std::vector<double> xs;
  for (int j = 0; j <= m; ++j) xs.push_back(span * uniform01(rng));
  std::sort(xs.begin(), xs.end());
  std::vector<double> hs;
  for (int j = 0; j < m; ++j) hs.push_back(uniform01(rng) < 0.2 ? 0.0 : uniform01(rng));
  std::vector<Atom> as;
  const int k = static_cast<int>(rng() % static_cast<unsigned>(atoms + 1));
  for (int a = 0; a < k; ++a) as.push_back({span * uniform01(rng), 0.05 + uniform01(rng)});
  // Reuse a breakpoint as an atom location now and then.
  if (k > 0 && uniform01(rng) < 0.3) as.front().location = xs[rng() % xs.size()];
  PiecewiseDensity d(std::move(xs), std::move(hs), std::move(as));
  if (poplotto::total_mass(d) <= 0.0) return PiecewiseDensity::uniform(0.0, span);
  return d.normalized();
}

poplotto::DiscreteBudgetDistribution random_distribution(std::mt19937_64& rng, int n, double lo, double hi) {
  std::vector<double> budgets;
  for (int i = 0; i < n; ++i) budgets.push_back(lo * std::pow(hi / lo, uniform01(rng)));
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  std::gamma_distribution<double> gamma(1.0);
  std::vector<poplotto::BudgetGroup> groups;
  for (double b : budgets) groups.push_back({b, gamma(rng)});
  return poplotto::DiscreteBudgetDistribution(std::move(groups));
}

int beats(const Die& a, const Die& b) {
  int wins = 0;
  for (int x : a) {
    for (int y : b) wins += x > y ? 1 : 0;
  }
  return wins;
}

namespace {

// All dice (sorted faces) drawn from the remaining per-value budget with 30
// pips.
void dice_from(std::array<int, 10>& left, int value, Die& die, int filled, int pips, std::vector<Die>& out) {
  if (filled == 6) {
    if (pips == 30) out.push_back(die);
    return;
  }
  if (value > 9) return;
  for (int c = std::min(left[value], 6 - filled); c >= 0; --c) {
    if (pips + c * value > 30) continue;
    for (int k = 0; k < c; ++k) die[filled + k] = value;
    left[value] -= c;
    dice_from(left, value + 1, die, filled + c, pips + c * value, out);
    left[value] += c;
  }
}

bool shares_value(const Die& a, const Die& b) {
  for (int x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

}  // namespace

std::optional<std::array<Die, 3>> search_nontransitive_dice() {
  std::array<int, 10> left{};
  for (int v = 1; v <= 9; ++v) left[v] = 2;
  std::vector<Die> firsts;
  Die die{};
  dice_from(left, 1, die, 0, 0, firsts);
  std::sort(firsts.begin(), firsts.end());
  for (const Die& a : firsts) {
    for (int x : a) --left[x];
    std::vector<Die> seconds;
    dice_from(left, 1, die, 0, 0, seconds);
    std::sort(seconds.begin(), seconds.end());
    for (const Die& b : seconds) {
      for (int x : b) --left[x];
      Die c{};
      int filled = 0;
      for (int v = 1; v <= 9; ++v) {
        for (int k = 0; k < left[v] && filled < 6; ++k) c[filled++] = v;
      }
      for (int x : b) ++left[x];
      if (filled != 6) continue;
      if (shares_value(a, b) || shares_value(b, c) || shares_value(a, c)) continue;
      if (beats(a, b) == 20 && beats(b, c) == 20 && beats(c, a) == 20) {
        for (int x : a) ++left[x];
        return std::array<Die, 3>{a, b, c};
      }
    }
    for (int x : a) ++left[x];
  }
  return std::nullopt;
}

}  // namespace oracle
