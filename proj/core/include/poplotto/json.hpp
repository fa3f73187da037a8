#pragma once

// JSON encodings of the library's value types.
//
// PiecewiseDensity: {"breakpoints":[...], "heights":[...], "atoms":[[loc, mass], ...]}
// Budget input:     {"subpopulations":[{"budget": b, "mass": k}, ...]}
// Dice input:       {"dice":[[f1, ..., f6], ...]}
// Solution:         {"strategies":[density, ...], "aggregate": density, ...}

#include <vector>

#include <nlohmann/json.hpp>

#include "poplotto/density.hpp"
#include "poplotto/equilibrium.hpp"
#include "poplotto/solver.hpp"
#include "poplotto/structure.hpp"

namespace poplotto {

void to_json(nlohmann::json& j, const PiecewiseDensity& d);
void from_json(const nlohmann::json& j, PiecewiseDensity& d);

void to_json(nlohmann::json& j, const DiscreteBudgetDistribution& dist);
// Throws std::invalid_argument (via the distribution's validation) or
// nlohmann::json::exception on malformed input.
DiscreteBudgetDistribution distribution_from_json(const nlohmann::json& j);

std::vector<std::vector<int>> dice_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const EquilibriumSolution& sol);
EquilibriumSolution solution_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const Dyad& d);
void to_json(nlohmann::json& j, const GroupCheck& c);
void to_json(nlohmann::json& j, const EquilibriumReport& r);
void to_json(nlohmann::json& j, const PrefixVerdict& v);
void to_json(nlohmann::json& j, const PayoffIdentity& p);
void to_json(nlohmann::json& j, const League& l);
void to_json(nlohmann::json& j, const LeaguePartition& p);
void to_json(nlohmann::json& j, const SubLeagueSplit& s);
void to_json(nlohmann::json& j, const SubLeagueStructure& s);
void to_json(nlohmann::json& j, const OutcomeMatrix& w);
void to_json(nlohmann::json& j, const TransitivityCheck& c);
void to_json(nlohmann::json& j, const TransitivityReport& r);

}  // namespace poplotto
