#include "poplotto/json.hpp"

#include <stdexcept>

namespace poplotto {
namespace {

// Group indices leave the library 1-based.
nlohmann::json one_based(const std::vector<std::size_t>& groups) {
  auto out = nlohmann::json::array();
  for (std::size_t g : groups) out.push_back(g + 1);
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const PiecewiseDensity& d) {
  auto atoms = nlohmann::json::array();
  for (const Atom& a : d.atoms()) atoms.push_back({a.location, a.mass});
  j = {{"breakpoints", std::vector<double>(d.breakpoints().begin(), d.breakpoints().end())},
       {"heights", std::vector<double>(d.heights().begin(), d.heights().end())},
       {"atoms", std::move(atoms)}};
}

void from_json(const nlohmann::json& j, PiecewiseDensity& d) {
  auto bps = j.value("breakpoints", std::vector<double>{});
  auto hs = j.value("heights", std::vector<double>{});
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) throw std::invalid_argument("atoms are [location, mass] pairs");
      atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    }
  }
  d = PiecewiseDensity(std::move(bps), std::move(hs), std::move(atoms));
}

void to_json(nlohmann::json& j, const DiscreteBudgetDistribution& dist) {
  auto groups = nlohmann::json::array();
  for (const auto& g : dist.groups()) groups.push_back({{"budget", g.budget}, {"mass", g.mass}});
  j = {{"subpopulations", std::move(groups)}};
}

DiscreteBudgetDistribution distribution_from_json(const nlohmann::json& j) {
  std::vector<BudgetGroup> groups;
  for (const auto& g : j.at("subpopulations")) {
    groups.push_back({g.at("budget").get<double>(), g.at("mass").get<double>()});
  }
  return DiscreteBudgetDistribution(std::move(groups));
}

std::vector<std::vector<int>> dice_from_json(const nlohmann::json& j) {
  return j.at("dice").get<std::vector<std::vector<int>>>();
}

void to_json(nlohmann::json& j, const EquilibriumSolution& sol) {
  j = {{"strategies", sol.strategies}, {"aggregate", sol.aggregate}};
}

EquilibriumSolution solution_from_json(const nlohmann::json& j) {
  auto strategies = j.at("strategies").get<std::vector<PiecewiseDensity>>();
  EquilibriumSolution sol = make_solution(std::move(strategies));
  if (j.contains("aggregate")) sol.aggregate = j.at("aggregate").get<PiecewiseDensity>();
  return sol;
}

void to_json(nlohmann::json& j, const Dyad& d) {
  j = {{"x1", d.x1}, {"x2", d.x2}, {"b", d.b}, {"lambda", d.lambda}};
}

void to_json(nlohmann::json& j, const GroupCheck& c) {
  j = {{"budget", c.budget},
       {"A", c.intercept},
       {"H", c.payoff},
       {"line_slope", c.slope},
       {"max_bound_violation", c.bound_violation},
       {"flat_on_hull_violation", c.flat_violation}};
}

void to_json(nlohmann::json& j, const EquilibriumReport& r) {
  j = {{"groups", r.groups},
       {"g_monotone_violation", r.monotone_violation},
       {"mixture_violation", r.mixture_violation},
       {"G0", r.g_at_zero},
       {"tolerance", r.tolerance},
       {"verdict", r.pass ? "pass" : "fail"}};
  if (r.best_deviation) {
    j["best_dyad"] = {{"group", r.best_deviation_group + 1},
                      {"dyad", r.best_deviation->dyad},
                      {"payoff", r.best_deviation->payoff},
                      {"gain", r.best_deviation->gain}};
  }
}

void to_json(nlohmann::json& j, const PrefixVerdict& v) {
  j = {{"prefix_size", v.prefix_size},
       {"threshold", v.threshold},
       {"verdict", v.pass ? "pass" : "fail"},
       {"worst_violation", v.report.worst_violation()}};
}

void to_json(nlohmann::json& j, const PayoffIdentity& p) {
  j = {{"max_deviation", p.max_deviation}, {"verdict", p.pass ? "pass" : "fail"}};
}

void to_json(nlohmann::json& j, const League& l) {
  j = {{"g", l.height}, {"members", one_based(l.members)}, {"span", {l.span_lo, l.span_hi}}};
}

void to_json(nlohmann::json& j, const LeaguePartition& p) { j = p.leagues; }

void to_json(nlohmann::json& j, const SubLeagueSplit& s) {
  auto parts = nlohmann::json::array();
  for (const auto& part : s.parts) parts.push_back(one_based(part));
  j = {{"prefix_size", s.prefix_size},
       {"threshold", s.threshold},
       {"league", s.parent_league + 1},
       {"parts", std::move(parts)}};
}

void to_json(nlohmann::json& j, const SubLeagueStructure& s) {
  auto subs = nlohmann::json::array();
  for (const auto& part : s.sub_leagues) subs.push_back(one_based(part));
  j = {{"leagues", s.leagues}, {"splits", s.splits}, {"sub_leagues", std::move(subs)}};
}

void to_json(nlohmann::json& j, const OutcomeMatrix& w) {
  j = nlohmann::json::array();
  for (std::size_t r = 0; r < w.size(); ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < w.size(); ++c) row.push_back(w(r, c));
    j.push_back(std::move(row));
  }
}

void to_json(nlohmann::json& j, const TransitivityCheck& c) {
  auto triples = nlohmann::json::array();
  for (const Triple& t : c.violations) triples.push_back({t.i + 1, t.j + 1, t.k + 1});
  j = {{"pass", c.pass}, {"violation_count", c.violation_count}, {"violations", std::move(triples)}};
}

void to_json(nlohmann::json& j, const TransitivityReport& r) {
  j = {{"weak_stochastic", r.weak_stochastic},
       {"strong_stochastic", r.strong_stochastic},
       {"certainty", r.certainty},
       {"dominance", r.dominance},
       {"establishment", r.establishment}};
}

}  // namespace poplotto
