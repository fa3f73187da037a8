// Randomized search for a nine-group population whose groups {1,2,3} and
// {4,5,6,7} form separate leagues among the first seven groups and share a
// league once group 8 arrives. The full population is then not transitive
// in establishment.
//
//   fixture_search --seed 3 --trials 200000 --out tests/fixtures/establishment.json

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include "CLI11.hpp"
#include "poplotto/equilibrium.hpp"
#include "poplotto/json.hpp"
#include "poplotto/solver.hpp"
#include "poplotto/structure.hpp"

namespace {

using namespace poplotto;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Budgets in three bands, masses from a flat Dirichlet. Values are rounded
// to three decimals so the frozen fixture reads cleanly.
std::vector<BudgetGroup> draw(std::mt19937_64& rng) {
  std::vector<double> budgets;
  for (int i = 0; i < 3; ++i) budgets.push_back(uniform(rng, 0.5, 2.0));
  for (int i = 0; i < 4; ++i) budgets.push_back(uniform(rng, 2.5, 8.0));
  for (int i = 0; i < 2; ++i) budgets.push_back(uniform(rng, 4.0, 16.0));
  std::sort(budgets.begin(), budgets.end());
  std::gamma_distribution<double> gamma(1.0);
  std::vector<BudgetGroup> groups;
  double total = 0.0;
  for (double b : budgets) {
    groups.push_back({std::round(b * 1000.0) / 1000.0, gamma(rng)});
    total += groups.back().mass;
  }
  int rest = 1000;
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
    const int units = static_cast<int>(std::lround(groups[i].mass / total * 1000.0));
    groups[i].mass = units / 1000.0;
    rest -= units;
  }
  groups.back().mass = rest / 1000.0;
  return groups;
}

bool contains(const std::vector<std::vector<std::size_t>>& sets, const std::vector<std::size_t>& s) {
  return std::find(sets.begin(), sets.end(), s) != sets.end();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search for an establishment-violating sub-league population"};
  std::uint64_t seed = 1;
  long trials = 100000;
  std::string out;
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--trials", trials, "maximum draws");
  app.add_option("--out", out, "write the fixture here instead of stdout");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::size_t> low{0, 1, 2};
  const std::vector<std::size_t> mid{3, 4, 5, 6};
  std::mt19937_64 rng(seed);
  for (long t = 0; t < trials; ++t) {
    std::vector<BudgetGroup> groups = draw(rng);
    bool valid = true;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      valid = valid && groups[i].mass > 0.0 && (i == 0 || groups[i].budget > groups[i - 1].budget);
    }
    if (!valid) continue;

    const DiscreteBudgetDistribution dist(groups);
    EquilibriumSolution sol;
    try {
      sol = solve(dist);
    } catch (const SolverError&) {
      continue;
    }
    const LeaguePartition full = leagues(sol);
    if (full.league_of(0) != full.league_of(6)) continue;

    const SubLeagueStructure subs = sub_leagues(dist);
    if (!contains(subs.sub_leagues, low) || !contains(subs.sub_leagues, mid)) continue;
    bool at_seven = false;
    for (const auto& split : subs.splits) {
      at_seven = at_seven || (split.prefix_size == 7 && contains(split.parts, low) && contains(split.parts, mid));
    }
    if (!at_seven) continue;
    // Group 8 alone already joins the two blocks.
    const LeaguePartition eight = leagues(solve(dist.prefix(8)));
    if (eight.league_of(0) != eight.league_of(6)) continue;

    const TransitivityReport tr = transitivity_report(outcome_matrix(sol));
    if (tr.establishment.pass || !tr.certainty.pass || !tr.dominance.pass) continue;
    if (!verify_nash(sol).pass) continue;

    nlohmann::json doc;
    for (const auto& g : groups) doc["subpopulations"].push_back({{"budget", g.budget}, {"mass", g.mass}});
    doc["search"] = {{"seed", seed}, {"trial", t}};
    const std::string text = doc.dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream(out) << text;
    }
    std::cerr << "found after " << t + 1 << " draws\n";
    return 0;
  }
  std::cerr << "no instance in " << trials << " draws\n";
  return 1;
}
