#include "poplotto/structure.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "poplotto/payoff.hpp"

namespace poplotto {
namespace {

// Index of the segment that owns x under the "left segment on a breakpoint"
// rule, or npos when x is outside the continuous part.
std::size_t owning_segment(const PiecewiseDensity& g, double x) {
  const auto xs = g.breakpoints();
  if (xs.empty()) return std::string::npos;
  auto it = std::lower_bound(xs.begin(), xs.end(), x - kTolerance);
  if (it == xs.end()) return std::string::npos;
  // Either x sits on breakpoint k (take the left segment) or strictly
  // inside (x_{k-1}, x_k); both resolve to segment k - 1.
  const auto k = static_cast<std::size_t>(it - xs.begin());
  return k == 0 ? std::string::npos : k - 1;
}

std::pair<double, double> flat_run(const PiecewiseDensity& g, double x, double c, double tol) {
  const std::size_t j = owning_segment(g, x);
  if (j == std::string::npos) return {x, x};
  const auto xs = g.breakpoints();
  const auto hs = g.heights();
  std::size_t lo = j;
  std::size_t hi = j;
  while (lo > 0 && std::abs(hs[lo - 1] - c) <= tol) --lo;
  while (hi + 1 < hs.size() && std::abs(hs[hi + 1] - c) <= tol) ++hi;
  return {xs[lo], xs[hi + 1]};
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Cells between consecutive breakpoints and atoms of the given strategies
// inside [lo, hi], each cut into `pieces` equal parts. Every strategy's CDF
// is linear inside a cell.
std::vector<std::pair<double, double>> union_cells(const std::vector<PiecewiseDensity>& fs,
                                                   const std::vector<std::size_t>& members,
                                                   double lo, double hi, int pieces) {
  std::vector<double> xs{lo, hi};
  for (std::size_t m : members) {
    for (double x : fs[m].breakpoints()) if (x > lo && x < hi) xs.push_back(x);
    for (const Atom& a : fs[m].atoms()) if (a.location > lo && a.location < hi) xs.push_back(a.location);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<std::pair<double, double>> cells;
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    if (xs[j + 1] - xs[j] <= kTolerance) continue;
    const double w = (xs[j + 1] - xs[j]) / pieces;
    for (int p = 0; p < pieces; ++p) {
      cells.emplace_back(xs[j] + w * p, p + 1 == pieces ? xs[j + 1] : xs[j] + w * (p + 1));
    }
  }
  return cells;
}

std::string fmt(double v, int precision = 17) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

void record(TransitivityCheck& check, const Triple& t) {
  check.pass = false;
  ++check.violation_count;
  if (check.violations.size() < kMaxRecordedTriples) check.violations.push_back(t);
}

}  // namespace

std::size_t LeaguePartition::league_of(std::size_t group) const {
  for (std::size_t l = 0; l < leagues.size(); ++l) {
    const auto& m = leagues[l].members;
    if (std::find(m.begin(), m.end(), group) != m.end()) return l;
  }
  throw std::out_of_range("group not in any league");
}

OutcomeMatrix::OutcomeMatrix(std::size_t n) : n_(n), values_(n * n, 0.5) {}

OutcomeMatrix OutcomeMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  OutcomeMatrix w(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("outcome matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const double v = rows[i][j];
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("outcome entries must lie in [0, 1]");
      if (std::abs(v + rows[j][i] - 1.0) > 1e-12) {
        throw std::invalid_argument("outcome matrix must satisfy W(i,j) + W(j,i) = 1");
      }
      w.values_[i * w.n_ + j] = v;
    }
  }
  return w;
}

void OutcomeMatrix::set(std::size_t i, std::size_t j, double w) {
  values_[i * n_ + j] = w;
  values_[j * n_ + i] = 1.0 - w;
}

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "dot") return GraphFormat::dot;
  if (name == "json") return GraphFormat::json;
  throw std::invalid_argument("unknown graph format: " + std::string(name));
}

std::vector<double> budgets_of(const EquilibriumSolution& sol) {
  std::vector<double> b;
  b.reserve(sol.strategies.size());
  for (const auto& f : sol.strategies) b.push_back(mean(f));
  return b;
}

LeaguePartition leagues(const EquilibriumSolution& sol, double tol) {
  const PiecewiseDensity agg = mixture(std::span<const PiecewiseDensity>(sol.strategies));
  const std::vector<double> budgets = budgets_of(sol);
  const std::size_t n = budgets.size();
  std::vector<double> height(n);
  for (std::size_t i = 0; i < n; ++i) height[i] = agg.density_left_of(budgets[i]);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (height[a] != height[b]) return height[a] > height[b];
    return budgets[a] < budgets[b];
  });

  LeaguePartition out;
  for (std::size_t i : order) {
    const auto [lo, hi] = flat_run(agg, budgets[i], height[i], tol);
    if (out.leagues.empty() || std::abs(out.leagues.back().height - height[i]) > tol) {
      out.leagues.push_back(League{height[i], {i}, lo, hi});
    } else {
      League& l = out.leagues.back();
      l.members.push_back(i);
      l.span_lo = std::min(l.span_lo, lo);
      l.span_hi = std::max(l.span_hi, hi);
    }
  }
  for (auto& l : out.leagues) std::sort(l.members.begin(), l.members.end());
  return out;
}

SubLeagueStructure sub_leagues(const DiscreteBudgetDistribution& dist, double tol) {
  SubLeagueStructure out;
  out.leagues = leagues(solve(dist), tol);
  std::set<std::vector<std::size_t>> distinct;
  for (std::size_t j = 1; j < dist.size(); ++j) {
    const LeaguePartition pl = leagues(solve(dist.prefix(j)), tol);
    for (std::size_t l = 0; l < out.leagues.leagues.size(); ++l) {
      std::map<std::size_t, std::vector<std::size_t>> by_prefix_league;
      for (std::size_t g : out.leagues.leagues[l].members) {
        if (g < j) by_prefix_league[pl.league_of(g)].push_back(g);
      }
      if (by_prefix_league.size() < 2) continue;
      SubLeagueSplit split{j, dist[j - 1].budget, l, {}};
      for (auto& [_, part] : by_prefix_league) {
        distinct.insert(part);
        split.parts.push_back(std::move(part));
      }
      out.splits.push_back(std::move(split));
    }
  }
  out.sub_leagues.assign(distinct.begin(), distinct.end());
  return out;
}

OutcomeMatrix outcome_matrix(const EquilibriumSolution& sol) {
  const std::size_t n = sol.strategies.size();
  std::vector<PiecewiseDensity> unit;
  unit.reserve(n);
  for (const auto& f : sol.strategies) unit.push_back(f.normalized());
  OutcomeMatrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) w.set(i, j, win_prob(unit[i], unit[j]));
  }
  return w;
}

TransitivityReport transitivity_report(const OutcomeMatrix& w, double tol) {
  TransitivityReport r;
  const std::size_t n = w.size();
  const auto expected = [tol](double v) { return v >= 0.5 - tol; };
  const auto certain = [tol](double v) { return v >= 1.0 - tol; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double ji = w(j, i);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double kj = w(k, j);
        const double ki = w(k, i);
        const Triple t{i, j, k};
        if (expected(ji) && expected(kj)) {
          if (!expected(ki)) record(r.weak_stochastic, t);
          if (ki < std::max(ji, kj) - tol) record(r.strong_stochastic, t);
        }
        if (certain(ji) && certain(kj) && !certain(ki)) record(r.certainty, t);
        if (expected(ji) && certain(kj) && !certain(ki)) record(r.dominance, t);
        if (certain(ji) && expected(kj) && !certain(ki)) record(r.establishment, t);
      }
    }
  }
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> budget_transitivity_violations(
    const OutcomeMatrix& w, std::span<const double> budgets) {
  if (budgets.size() != w.size()) throw std::invalid_argument("budget count differs from matrix size");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (budgets[i] > budgets[j] && !(w(i, j) > 0.5)) out.emplace_back(i, j);
    }
  }
  return out;
}

EquilibriumSolution dice_to_population(const std::vector<std::vector<int>>& dice) {
  if (dice.empty()) throw std::invalid_argument("need at least one die");
  const std::size_t faces = dice.front().size();
  if (faces == 0) throw std::invalid_argument("dice need at least one face");
  const double weight = 1.0 / static_cast<double>(dice.size());
  std::vector<PiecewiseDensity> strategies;
  for (const auto& die : dice) {
    if (die.size() != faces) throw std::invalid_argument("all dice need the same number of faces");
    std::map<int, int> counts;
    for (int v : die) {
      if (v < 1) throw std::invalid_argument("face values must be at least 1");
      ++counts[v];
    }
    std::vector<PiecewiseDensity> blocks;
    for (auto [v, c] : counts) {
      blocks.push_back(PiecewiseDensity::uniform(v - 1.0, v, weight * c / static_cast<double>(faces)));
    }
    strategies.push_back(mixture(std::span<const PiecewiseDensity>(blocks)));
  }
  return make_solution(std::move(strategies));
}

EquilibriumSolution league_rewire(const EquilibriumSolution& sol, std::size_t league,
                                  std::uint64_t seed, double tol) {
  const LeaguePartition partition = leagues(sol, tol);
  if (league >= partition.leagues.size()) throw std::invalid_argument("no such league");
  const League& target_league = partition.leagues[league];
  const auto& members = target_league.members;
  if (members.size() < 2) throw std::invalid_argument("league has fewer than two groups");

  bool overlap = false;
  for (std::size_t x = 0; x < members.size(); ++x) {
    for (std::size_t y = x + 1; y < members.size(); ++y) {
      const auto& fa = sol.strategies[members[x]];
      const auto& fb = sol.strategies[members[y]];
      overlap = overlap || std::min(fa.support_hi(), fb.support_hi()) -
                                   std::max(fa.support_lo(), fb.support_lo()) > kTolerance;
    }
  }
  if (!overlap) throw std::invalid_argument("no two league members overlap");

  const OutcomeMatrix w0 = outcome_matrix(sol);
  std::vector<std::pair<std::size_t, std::size_t>> targets;  // (winner, loser)
  for (std::size_t a : members) {
    for (std::size_t b : members) {
      if (a != b && w0(a, b) > 0.5 + tol) targets.emplace_back(a, b);
    }
  }
  std::mt19937_64 rng(seed);
  std::shuffle(targets.begin(), targets.end(), rng);

  constexpr int kPieces = 4;
  const auto cells =
      union_cells(sol.strategies, members, target_league.span_lo, target_league.span_hi, kPieces);
  const std::size_t nc = cells.size();
  std::vector<double> mids(nc), widths(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    mids[c] = 0.5 * (cells[c].first + cells[c].second);
    widths[c] = cells[c].second - cells[c].first;
  }

  std::vector<PiecewiseDensity> strategies = sol.strategies;
  // Per member: density and normalized CDF at each cell midpoint.
  std::map<std::size_t, std::vector<double>> dens, cdfs;
  const auto refresh = [&](std::size_t m) {
    const double mass = total_mass(strategies[m]);
    dens[m].assign(nc, 0.0);
    cdfs[m].assign(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
      dens[m][c] = strategies[m].density_at(mids[c]);
      cdfs[m][c] = cdf(strategies[m], mids[c]).mid() / mass;
    }
  };
  for (std::size_t m : members) refresh(m);

  struct Swap {
    std::size_t outer, inner, c1, c2, c3;
    double d1, d2, d3;
  };
  // A uniform slice of mass d on cell c integrates a CDF linear on c to
  // d * F(mid). With Delta_a, Delta_b the changes to a and b, W(a, b) moves
  // by int Delta_a F_b - int Delta_b F_a; the cross term vanishes because
  // every swap is mass neutral.
  const auto effect = [&](const Swap& s, std::size_t a, std::size_t b) {
    const auto side = [&](std::size_t m, std::size_t other) {
      const double sign = m == s.outer ? 1.0 : (m == s.inner ? -1.0 : 0.0);
      if (sign == 0.0) return 0.0;
      const auto& f = cdfs[other];
      const double mass = total_mass(strategies[m]);
      return sign * (-s.d1 * f[s.c1] + s.d2 * f[s.c2] - s.d3 * f[s.c3]) / mass;
    };
    return side(a, b) - side(b, a);
  };

  constexpr int kMaxSteps = 500;
  constexpr double kTiny = 1e-12;
  bool changed = false;
  for (const auto& [winner, loser] : targets) {
    for (int step = 0; step < kMaxSteps; ++step) {
      const double frac = 0.5 + 0.5 * unit_draw(rng);
      std::optional<Swap> best;
      double best_effect = -kTiny;
      for (std::size_t outer : members) {
        for (std::size_t inner : members) {
          if (outer == inner) continue;
          if (outer != winner && outer != loser && inner != winner && inner != loser) continue;
          const auto& fo = dens[outer];
          const auto& fi = dens[inner];
          for (std::size_t c2 = 1; c2 + 1 < nc; ++c2) {
            if (fi[c2] <= kTiny) continue;
            for (std::size_t c1 = 0; c1 < c2; ++c1) {
              if (fo[c1] <= kTiny) continue;
              for (std::size_t c3 = c2 + 1; c3 < nc; ++c3) {
                if (fo[c3] <= kTiny) continue;
                // Outer slices d1 on c1 and d3 on c3 against d1 + d3 on c2
                // keep both mass and first moment.
                const double ratio = (mids[c2] - mids[c1]) / (mids[c3] - mids[c2]);
                const double cap = std::min({fo[c1] * widths[c1], fo[c3] * widths[c3] / ratio,
                                             fi[c2] * widths[c2] / (1.0 + ratio)});
                const double d1 = frac * cap;
                const Swap s{outer, inner, c1, c2, c3, d1, d1 * (1.0 + ratio), d1 * ratio};
                const double e = effect(s, winner, loser);
                if (e < best_effect) {
                  best_effect = e;
                  best = s;
                }
              }
            }
          }
        }
      }
      if (!best) break;
      const Swap& s = *best;
      strategies[s.outer] = strategies[s.outer]
                                .with_block_added(cells[s.c1].first, cells[s.c1].second, -s.d1 / widths[s.c1])
                                .with_block_added(cells[s.c3].first, cells[s.c3].second, -s.d3 / widths[s.c3])
                                .with_block_added(cells[s.c2].first, cells[s.c2].second, s.d2 / widths[s.c2]);
      strategies[s.inner] = strategies[s.inner]
                                .with_block_added(cells[s.c1].first, cells[s.c1].second, s.d1 / widths[s.c1])
                                .with_block_added(cells[s.c3].first, cells[s.c3].second, s.d3 / widths[s.c3])
                                .with_block_added(cells[s.c2].first, cells[s.c2].second, -s.d2 / widths[s.c2]);
      refresh(s.outer);
      refresh(s.inner);
      changed = true;
      const double now = win_prob(strategies[winner].normalized(), strategies[loser].normalized());
      if (now < 0.5 - tol) return make_solution(std::move(strategies));
    }
  }
  if (!changed) throw std::runtime_error("no budget-neutral swap changed any outcome");
  return make_solution(std::move(strategies));
}

std::string export_digraph(const OutcomeMatrix& w, const LeaguePartition& partition,
                           std::span<const double> budgets, GraphFormat format, double tol) {
  const std::size_t n = w.size();
  if (budgets.size() != n) throw std::invalid_argument("budget count differs from matrix size");
  struct Edge {
    std::size_t from, to;
    double p;
    bool certain;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && w(j, i) >= 0.5 - tol) edges.push_back({i, j, w(j, i), w(j, i) >= 1.0 - tol});
    }
  }

  if (format == GraphFormat::json) {
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t l = 0;
      try {
        l = partition.league_of(i);
      } catch (const std::out_of_range&) {
        l = partition.leagues.size();
      }
      doc["nodes"].push_back({{"id", i + 1}, {"budget", budgets[i]}, {"league", l + 1}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : edges) {
      doc["edges"].push_back(
          {{"from", e.from + 1}, {"to", e.to + 1}, {"probability", e.p}, {"certain", e.certain}});
    }
    return doc.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "digraph population {\n";
  std::vector<bool> placed(n, false);
  for (std::size_t l = 0; l < partition.leagues.size(); ++l) {
    const League& league = partition.leagues[l];
    os << "  subgraph cluster_league" << l + 1 << " {\n";
    os << "    label=\"league " << l + 1 << " (g=" << fmt(league.height, 6) << ")\";\n";
    for (std::size_t g : league.members) {
      if (g >= n) continue;
      os << "    g" << g + 1 << " [label=\"" << g + 1 << " (b=" << fmt(budgets[g], 6) << ")\"];\n";
      placed[g] = true;
    }
    os << "  }\n";
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (!placed[g]) os << "  g" << g + 1 << " [label=\"" << g + 1 << " (b=" << fmt(budgets[g], 6) << ")\"];\n";
  }
  for (const auto& e : edges) {
    os << "  g" << e.from + 1 << " -> g" << e.to + 1 << " [certain=" << (e.certain ? "true" : "false")
       << ", color=" << (e.certain ? "red" : "black") << ", p=" << fmt(e.p) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string plot_csv(const EquilibriumSolution& sol) {
  std::ostringstream os;
  os << "series,x,value\n";
  const auto emit = [&os](const std::string& name, const PiecewiseDensity& d) {
    const auto xs = d.breakpoints();
    const auto hs = d.heights();
    for (std::size_t j = 0; j < hs.size(); ++j) {
      os << name << ',' << fmt(xs[j]) << ',' << fmt(hs[j]) << '\n';
      os << name << ',' << fmt(xs[j + 1]) << ',' << fmt(hs[j]) << '\n';
    }
    for (const Atom& a : d.atoms()) os << name << ".atom," << fmt(a.location) << ',' << fmt(a.mass) << '\n';
  };
  emit("g", sol.aggregate);
  for (std::size_t i = 0; i < sol.strategies.size(); ++i) emit("f" + std::to_string(i + 1), sol.strategies[i]);
  return os.str();
}

}  // namespace poplotto
