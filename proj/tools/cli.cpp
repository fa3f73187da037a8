#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "poplotto/equilibrium.hpp"
#include "poplotto/json.hpp"
#include "poplotto/solver.hpp"
#include "poplotto/structure.hpp"

namespace poplotto::cli {
namespace {

using nlohmann::json;

struct Input {
  json doc;
  std::optional<DiscreteBudgetDistribution> dist;
  std::optional<EquilibriumSolution> sol;
  std::optional<std::vector<std::vector<int>>> dice;
};

Input load(const std::string& path, std::ostream& log) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  Input input;
  try {
    input.doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!input.doc.is_object()) throw std::invalid_argument("input must be a JSON object");
  if (input.doc.contains("subpopulations")) {
    input.dist = distribution_from_json(input.doc);
    if (std::abs(input.dist->input_mass() - 1.0) > 1e-6) {
      log << "warning: masses sum to " << std::setprecision(17) << input.dist->input_mass()
          << "; normalized to 1\n";
    }
  }
  if (input.doc.contains("strategies")) input.sol = solution_from_json(input.doc);
  if (input.doc.contains("dice")) input.dice = dice_from_json(input.doc);
  if (!input.dist && !input.sol && !input.dice) {
    throw std::invalid_argument("input needs \"subpopulations\", \"strategies\" or \"dice\"");
  }
  return input;
}

// Budgets of a solution as a distribution, when they are strictly
// increasing; prefix checks need that ordering.
std::optional<DiscreteBudgetDistribution> implied_distribution(const EquilibriumSolution& sol) {
  std::vector<BudgetGroup> groups;
  for (const auto& f : sol.strategies) {
    const double b = mean(f);
    if (!groups.empty() && b <= groups.back().budget) return std::nullopt;
    groups.push_back({b, total_mass(f)});
  }
  return DiscreteBudgetDistribution(std::move(groups));
}

EquilibriumSolution solution_of(const Input& input) {
  if (input.sol) return *input.sol;
  if (input.dist) return solve(*input.dist);
  return dice_to_population(*input.dice);
}

std::optional<DiscreteBudgetDistribution> distribution_of(const Input& input,
                                                         const EquilibriumSolution& sol) {
  if (input.dist && input.dist->size() == sol.strategies.size()) return input.dist;
  return implied_distribution(sol);
}

struct Verdicts {
  EquilibriumReport nash;
  EquilibriumReport linear;
  PayoffIdentity identity;
  std::vector<PrefixVerdict> prefixes;
  bool has_prefixes = false;

  bool pass() const {
    bool ok = nash.pass && linear.pass && identity.pass;
    for (const auto& p : prefixes) ok = ok && p.pass;
    return ok;
  }
};

Verdicts check(const EquilibriumSolution& sol, const std::optional<DiscreteBudgetDistribution>& dist,
               double tol) {
  Verdicts v;
  v.nash = verify_nash(sol, tol);
  v.linear = verify_linear_bounds(sol, tol);
  v.identity = payoff_identity_check(sol, tol);
  if (dist) {
    v.prefixes = verify_subpop_consistency(*dist, sol, tol);
    v.has_prefixes = true;
  }
  return v;
}

json to_json(const Verdicts& v) {
  json j = {{"nash", v.nash},
            {"linear_bounds", v.linear},
            {"payoff_identity", v.identity},
            {"verdict", v.pass() ? "pass" : "fail"}};
  if (v.has_prefixes) j["subpop_consistency"] = v.prefixes;
  return j;
}

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string verdict(bool pass) { return pass ? "pass" : "fail"; }

void summarize_leagues(std::ostream& os, const LeaguePartition& partition, std::span<const double> budgets) {
  os << "league  g            span                  members\n";
  for (std::size_t l = 0; l < partition.leagues.size(); ++l) {
    const League& league = partition.leagues[l];
    std::ostringstream span;
    span << '[' << num(league.span_lo) << ", " << num(league.span_hi) << ']';
    os << std::left << std::setw(8) << l + 1 << std::setw(13) << num(league.height) << std::setw(22)
       << span.str();
    for (std::size_t g : league.members) os << ' ' << g + 1 << " (b=" << num(budgets[g]) << ')';
    os << '\n';
  }
  os << std::right;
}

void summarize_verdicts(std::ostream& os, const Verdicts& v) {
  os << "nash: " << verdict(v.nash.pass) << " (worst violation " << num(v.nash.worst_violation(), 3) << ")\n";
  os << "linear bounds: " << verdict(v.linear.pass) << " (worst violation "
     << num(v.linear.worst_violation(), 3) << ")\n";
  os << "payoff identity: " << verdict(v.identity.pass) << " (max |H - G(b)| "
     << num(v.identity.max_deviation, 3) << ")\n";
  if (v.nash.best_deviation) {
    os << "best dyad gain: " << num(v.nash.best_deviation->gain, 3) << " (group "
       << v.nash.best_deviation_group + 1 << ")\n";
  }
  if (v.has_prefixes) {
    std::size_t ok = 0;
    for (const auto& p : v.prefixes) ok += p.pass ? 1 : 0;
    os << "sub-population consistency: " << ok << '/' << v.prefixes.size() << " prefixes pass\n";
  }
}

void summarize_transitivity(std::ostream& os, const TransitivityReport& r) {
  const auto item = [&os](const char* name, const TransitivityCheck& c, bool last) {
    os << name << ' ' << verdict(c.pass);
    if (!c.pass) os << " (" << c.violation_count << " triples)";
    os << (last ? "\n" : ", ");
  };
  os << "transitivity: ";
  item("weak_stochastic", r.weak_stochastic, false);
  item("strong_stochastic", r.strong_stochastic, false);
  item("certainty", r.certainty, false);
  item("dominance", r.dominance, false);
  item("establishment", r.establishment, true);
}

void summarize_matrix(std::ostream& os, const OutcomeMatrix& w) {
  os << "outcome matrix W(i, j):\n";
  for (std::size_t i = 0; i < w.size(); ++i) {
    os << "  ";
    for (std::size_t j = 0; j < w.size(); ++j) os << std::setw(10) << num(w(i, j), 5);
    os << '\n';
  }
}

// Machine output for the chosen format: the command's JSON document, step
// samples of the solution, or its outcome digraph.
std::string render(const RunConfig& config, const json& doc, const EquilibriumSolution& sol) {
  switch (config.format) {
    case Format::json:
      return doc.dump(2) + "\n";
    case Format::csv:
      return plot_csv(sol);
    case Format::dot: {
      const auto budgets = budgets_of(sol);
      return export_digraph(outcome_matrix(sol), leagues(sol, config.tol), budgets, GraphFormat::dot,
                            config.tol);
    }
  }
  return {};
}

int cmd_solve(const RunConfig& config, const Input& input, json& doc, EquilibriumSolution& sol,
              std::ostream& summary) {
  if (!input.dist) throw std::invalid_argument("solve needs \"subpopulations\"");
  sol = solve(*input.dist);
  const Verdicts v = check(sol, input.dist, config.tol);
  doc = *input.dist;
  doc["strategies"] = sol.strategies;
  doc["aggregate"] = sol.aggregate;
  doc["reports"] = to_json(v);
  summary << "solved " << sol.strategies.size() << " groups\n";
  summarize_leagues(summary, leagues(sol, config.tol), budgets_of(sol));
  summarize_verdicts(summary, v);
  return v.pass() ? kOk : kVerificationFailed;
}

int cmd_verify(const RunConfig& config, const Input& input, json& doc, EquilibriumSolution& sol,
               std::ostream& summary) {
  if (!input.sol && !input.dist) throw std::invalid_argument("verify needs \"strategies\" or \"subpopulations\"");
  sol = solution_of(input);
  const Verdicts v = check(sol, distribution_of(input, sol), config.tol);
  doc = {{"reports", to_json(v)}};
  summary << "verified " << sol.strategies.size() << " groups\n";
  summarize_verdicts(summary, v);
  return v.pass() ? kOk : kVerificationFailed;
}

int cmd_analyze(const RunConfig& config, const Input& input, json& doc, EquilibriumSolution& sol,
                std::ostream& summary, std::ostream& log) {
  sol = solution_of(input);
  const auto dist = distribution_of(input, sol);
  const Verdicts v = check(sol, dist, config.tol);
  if (!v.nash.pass) log << "warning: population is not a Nash equilibrium; leagues are indicative only\n";
  const auto budgets = budgets_of(sol);
  const LeaguePartition partition = leagues(sol, config.tol);
  const OutcomeMatrix w = outcome_matrix(sol);
  const TransitivityReport tr = transitivity_report(w, config.tol);
  json budget_violations = json::array();
  for (auto [i, j] : budget_transitivity_violations(w, budgets)) budget_violations.push_back({i + 1, j + 1});

  doc = {{"budgets", budgets},
         {"leagues", partition},
         {"outcome_matrix", w},
         {"transitivity", tr},
         {"budget_transitivity_violations", budget_violations},
         {"reports", to_json(v)}};
  if (input.dist && !input.sol) doc["sub_leagues"] = sub_leagues(*input.dist, config.tol);

  summarize_leagues(summary, partition, budgets);
  if (doc.contains("sub_leagues")) {
    const auto& subs = doc["sub_leagues"]["sub_leagues"];
    summary << "sub-leagues: " << (subs.empty() ? "none" : subs.dump()) << '\n';
  }
  summarize_transitivity(summary, tr);
  summary << "budget transitivity violations: " << budget_violations.size() << '\n';
  summarize_verdicts(summary, v);
  return kOk;
}

int cmd_dice(const RunConfig& config, const Input& input, json& doc, EquilibriumSolution& sol,
             std::ostream& summary) {
  if (!input.dice) throw std::invalid_argument("dice needs \"dice\"");
  sol = dice_to_population(*input.dice);
  const auto budgets = budgets_of(sol);
  const OutcomeMatrix w = outcome_matrix(sol);
  const TransitivityReport tr = transitivity_report(w, config.tol);
  const EquilibriumReport nash = verify_nash(sol, config.tol);
  doc = {{"strategies", sol.strategies},
         {"aggregate", sol.aggregate},
         {"budgets", budgets},
         {"leagues", leagues(sol, config.tol)},
         {"outcome_matrix", w},
         {"transitivity", tr},
         {"reports", {{"nash", nash}, {"payoff_identity", payoff_identity_check(sol, config.tol)}}}};
  summary << sol.strategies.size() << " dice, budgets";
  for (double b : budgets) summary << ' ' << num(b);
  summary << '\n';
  summarize_matrix(summary, w);
  summarize_transitivity(summary, tr);
  summary << "nash: " << verdict(nash.pass) << " (worst violation " << num(nash.worst_violation(), 3) << ")\n";
  return kOk;
}

int cmd_rewire(const RunConfig& config, const Input& input, json& doc, EquilibriumSolution& sol,
               std::ostream& summary) {
  if (config.league == 0) throw std::invalid_argument("--league is 1-based");
  const EquilibriumSolution before = solution_of(input);
  const auto dist = distribution_of(input, before);
  sol = league_rewire(before, config.league - 1, config.seed, config.tol);
  const OutcomeMatrix w0 = outcome_matrix(before);
  const OutcomeMatrix w1 = outcome_matrix(sol);
  json flipped = json::array();
  for (std::size_t i = 0; i < w0.size(); ++i) {
    for (std::size_t j = 0; j < w0.size(); ++j) {
      if (w0(i, j) > 0.5 + config.tol && w1(i, j) < 0.5 - config.tol) flipped.push_back({i + 1, j + 1});
    }
  }
  const Verdicts v = check(sol, dist, config.tol);
  doc = {{"strategies", sol.strategies},
         {"aggregate", sol.aggregate},
         {"seed", config.seed},
         {"league", config.league},
         {"outcome_matrix_before", w0},
         {"outcome_matrix", w1},
         {"reversed", flipped},
         {"reports", to_json(v)}};
  summary << "rewired league " << config.league << " with seed " << config.seed << "; " << flipped.size()
          << " expected outcomes reversed\n";
  summarize_matrix(summary, w1);
  summarize_verdicts(summary, v);
  return kOk;
}

int cmd_export(const RunConfig& config, const Input& input, json& doc, EquilibriumSolution& sol,
               std::ostream& summary) {
  sol = solution_of(input);
  const auto budgets = budgets_of(sol);
  doc = json::parse(export_digraph(outcome_matrix(sol), leagues(sol, config.tol), budgets, GraphFormat::json,
                                   config.tol));
  summary << "exported " << sol.strategies.size() << " groups\n";
  return kOk;
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "solve") return Command::solve;
  if (name == "verify") return Command::verify;
  if (name == "analyze") return Command::analyze;
  if (name == "dice") return Command::dice;
  if (name == "rewire") return Command::rewire;
  if (name == "export") return Command::export_graph;
  throw std::invalid_argument("unknown command: " + std::string(name));
}

Format parse_format(std::string_view name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  if (name == "dot") return Format::dot;
  throw std::invalid_argument("unknown format: " + std::string(name));
}

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  if (!(config.tol > 0.0) || !std::isfinite(config.tol)) {
    log << "error: --tol must be positive\n";
    return kInvalidInput;
  }
  std::ostream& summary = config.output.empty() ? log : out;
  json doc;
  EquilibriumSolution sol;
  int code = kOk;
  std::string text;
  try {
    const Input input = load(config.input, log);
    switch (config.command) {
      case Command::solve: code = cmd_solve(config, input, doc, sol, summary); break;
      case Command::verify: code = cmd_verify(config, input, doc, sol, summary); break;
      case Command::analyze: code = cmd_analyze(config, input, doc, sol, summary, log); break;
      case Command::dice: code = cmd_dice(config, input, doc, sol, summary); break;
      case Command::rewire: code = cmd_rewire(config, input, doc, sol, summary); break;
      case Command::export_graph: code = cmd_export(config, input, doc, sol, summary); break;
    }
    text = render(config, doc, sol);
  } catch (const SolverError& e) {
    log << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const json::exception& e) {
    log << "error: invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::logic_error& e) {
    log << "error: invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::runtime_error& e) {
    log << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }

  if (config.output.empty()) {
    out << text;
  } else {
    std::ofstream file(config.output);
    if (!(file << text)) {
      log << "error: cannot write " << config.output << '\n';
      return kInvalidInput;
    }
  }
  if (code == kVerificationFailed) log << "verification failed\n";
  return code;
}

}  // namespace poplotto::cli
