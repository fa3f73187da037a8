#include "poplotto/solver.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace poplotto {
namespace {

// Heights closer than this (relative) are merged into one terrace.
constexpr double kHeightMergeTolerance = 1e-12;

PiecewiseDensity block(double lo, double hi, double height) {
  return PiecewiseDensity({lo, hi}, {height});
}

// Pours mass k with mean beta onto `prof`, appending the pieces of the new
// strategy to `pieces`. Overflow raises the last terrace flush with the one
// before it, merges them, and keeps pouring the leftover mass with the
// budget adjusted so that the pieces as a whole keep mean beta.
void pour(TerraceProfile& prof, double beta, double k, std::vector<PiecewiseDensity>& pieces) {
  auto& P = prof.boundaries;
  auto& Y = prof.heights;
  bool allow_append = true;
  for (;;) {
    const std::size_t end = P.size() - 1;
    if (allow_append && beta > P[end]) {
      const double p = beta + (beta - P[end]);
      const double y = k / (p - P[end]);
      if (y < Y[end]) {
        pieces.push_back(block(P[end], p, y));
        P.push_back(p);
        Y.push_back(y);
        return;
      }
    }
    if (end == 0) throw SolverError("budget must be positive", 0);

    const double x2 = P[end - 1];
    const double x1 = P[end];
    const double y1 = Y[end];
    const QuadraticFill q = quadratic_fill(x2, x1, y1, k, beta);
    if (!(q.p > x1)) {
      throw SolverError("mean not reachable before the wall meets the terraces "
                        "(budgets out of order?)", 0);
    }
    if (q.y < y1 - kTolerance) {
      throw SolverError("fill height fell below the terrace it covers", 0);
    }
    if (q.y < Y[end - 1]) {
      if (q.y > y1) pieces.push_back(block(x2, x1, q.y - y1));
      pieces.push_back(block(x1, q.p, q.y));
      P[end] = q.p;
      Y[end] = q.y;
      if (end >= 2 && Y[end - 1] - Y[end] <= kHeightMergeTolerance * Y[end - 1]) {
        P.erase(P.begin() + static_cast<std::ptrdiff_t>(end - 1));
        Y.erase(Y.begin() + static_cast<std::ptrdiff_t>(end - 1));
      }
      return;
    }

    // Overflow: raise [x2, x1] to the previous terrace and merge.
    const double raise = Y[end - 1] - y1;
    const double used = raise * (x1 - x2);
    const double leftover = k - used;
    if (!(leftover > 0.0)) throw SolverError("overflow consumed all of the group's mass", 0);
    pieces.push_back(block(x2, x1, raise));
    beta = (k * beta - used * 0.5 * (x1 + x2)) / leftover;
    k = leftover;
    P.erase(P.begin() + static_cast<std::ptrdiff_t>(end - 1));
    Y.erase(Y.begin() + static_cast<std::ptrdiff_t>(end));
    allow_append = false;
  }
}

}  // namespace

DiscreteBudgetDistribution::DiscreteBudgetDistribution(std::vector<BudgetGroup> groups)
    : groups_(std::move(groups)) {
  if (groups_.empty()) throw std::invalid_argument("distribution needs at least one group");
  double total = 0.0;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const auto& g = groups_[i];
    if (!std::isfinite(g.budget) || !(g.budget > 0.0)) {
      throw std::invalid_argument("budget of group " + std::to_string(i + 1) + " must be positive");
    }
    if (!std::isfinite(g.mass) || !(g.mass > 0.0)) {
      throw std::invalid_argument("mass of group " + std::to_string(i + 1) + " must be positive");
    }
    if (i > 0 && !(g.budget > groups_[i - 1].budget)) {
      throw std::invalid_argument("budgets must be strictly increasing (group " +
                                  std::to_string(i + 1) + ")");
    }
    total += g.mass;
  }
  input_mass_ = total;
  for (auto& g : groups_) g.mass /= total;
}

DiscreteBudgetDistribution DiscreteBudgetDistribution::prefix(std::size_t count) const {
  if (count == 0 || count > groups_.size()) throw std::out_of_range("prefix size out of range");
  return DiscreteBudgetDistribution(
      std::vector<BudgetGroup>(groups_.begin(), groups_.begin() + static_cast<std::ptrdiff_t>(count)));
}

PiecewiseDensity TerraceProfile::density() const {
  if (terrace_count() == 0) return {};
  return PiecewiseDensity(boundaries, std::vector<double>(heights.begin() + 1, heights.end()));
}

QuadraticFill quadratic_fill(double x2, double x1, double y1, double k, double beta) {
  if (!(x2 < x1)) throw std::invalid_argument("quadratic_fill needs x2 < x1");
  if (!(k > 0.0)) throw std::invalid_argument("quadratic_fill needs k > 0");
  if (!(y1 >= 0.0)) throw std::invalid_argument("quadratic_fill needs y1 >= 0");

  const double retained = (x1 - x2) * y1;
  const double a = k + retained;
  const double b = -2.0 * k * beta - (x1 * x1 - x2 * x2) * y1;
  const double c = -x2 * x2 * a - x2 * b;
  double disc = b * b - 4.0 * a * c;
  if (disc < -kTolerance * b * b) throw SolverError("negative discriminant", 0);
  disc = std::max(disc, 0.0);
  const double p = (-b + std::sqrt(disc)) / (2.0 * a);
  if (!(p > x2)) throw SolverError("degenerate fill root", 0);
  return {p, a / (p - x2)};
}

FillResult fill(const TerraceProfile& profile, double beta, double k) {
  if (!std::isfinite(beta) || !(beta > 0.0)) throw std::invalid_argument("fill needs beta > 0");
  if (!std::isfinite(k) || !(k > 0.0)) throw std::invalid_argument("fill needs k > 0");
  FillResult out{profile, {}};
  std::vector<PiecewiseDensity> pieces;
  pour(out.profile, beta, k, pieces);
  out.strategy = mixture(pieces);
  return out;
}

EquilibriumSolution solve(const DiscreteBudgetDistribution& dist) {
  TerraceProfile profile;
  std::vector<PiecewiseDensity> strategies;
  strategies.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    try {
      FillResult r = fill(profile, dist[i].budget, dist[i].mass);
      profile = std::move(r.profile);
      strategies.push_back(std::move(r.strategy));
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " at group " + std::to_string(i + 1), i);
    }
  }
  return make_solution(std::move(strategies));
}

EquilibriumSolution make_solution(std::vector<PiecewiseDensity> strategies) {
  EquilibriumSolution sol;
  sol.aggregate = mixture(std::span<const PiecewiseDensity>(strategies));
  sol.strategies = std::move(strategies);
  return sol;
}

}  // namespace poplotto
