#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "poplotto/density.hpp"
#include "poplotto/solver.hpp"

namespace poplotto {

// Groups whose budgets sit on the same aggregate height c. Lower-height
// leagues beat higher-height leagues with certainty.
struct League {
  double height = 0.0;
  std::vector<std::size_t> members;  // ascending group indices
  double span_lo = 0.0;              // flat run of the aggregate at `height`
  double span_hi = 0.0;
};

struct LeaguePartition {
  std::vector<League> leagues;  // ordered by strictly decreasing height

  std::size_t league_of(std::size_t group) const;
};

// Square matrix of pairwise payoffs W(i, j) = H(f_i, f_j), with
// W(i, j) + W(j, i) = 1 and 1/2 on the diagonal.
class OutcomeMatrix {
 public:
  OutcomeMatrix() = default;
  explicit OutcomeMatrix(std::size_t n);

  // Validates shape, range and complementarity within 1e-12.
  static OutcomeMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  // Sets W(i, j) = w and W(j, i) = 1 - w.
  void set(std::size_t i, std::size_t j, double w);

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

struct Triple {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct TransitivityCheck {
  bool pass = true;
  std::size_t violation_count = 0;
  std::vector<Triple> violations;  // first kMaxRecordedTriples only
};

inline constexpr std::size_t kMaxRecordedTriples = 64;

struct TransitivityReport {
  TransitivityCheck weak_stochastic;
  TransitivityCheck strong_stochastic;
  TransitivityCheck certainty;
  TransitivityCheck dominance;
  TransitivityCheck establishment;
};

struct SubLeagueSplit {
  std::size_t prefix_size = 0;  // groups 1..prefix_size present
  double threshold = 0.0;       // budget of the last present group
  std::size_t parent_league = 0;
  std::vector<std::vector<std::size_t>> parts;
};

struct SubLeagueStructure {
  LeaguePartition leagues;
  std::vector<SubLeagueSplit> splits;
  // Distinct sub-leagues over all thresholds, sorted.
  std::vector<std::vector<std::size_t>> sub_leagues;
};

enum class GraphFormat { dot, json };

GraphFormat parse_graph_format(std::string_view name);

// Conditional means of the strategies.
std::vector<double> budgets_of(const EquilibriumSolution& sol);

// Groups clustered by the aggregate height at their budget. A budget on a
// breakpoint takes the height of the segment to its left.
LeaguePartition leagues(const EquilibriumSolution& sol, double tol = kTolerance);

// Re-solves every proper prefix of the distribution. Whenever the members
// of a full league that are present at a threshold fall into two or more
// leagues there, each of those parts is a sub-league. One level is reported
// per threshold.
SubLeagueStructure sub_leagues(const DiscreteBudgetDistribution& dist, double tol = kTolerance);

OutcomeMatrix outcome_matrix(const EquilibriumSolution& sol);

// Exhaustive scan of ordered triples of distinct groups. Antecedents
// "H >= 1/2" and "H = 1" are read as H >= 1/2 - tol and H >= 1 - tol.
TransitivityReport transitivity_report(const OutcomeMatrix& w, double tol = kTolerance);

// Pairs (i, j) with budget_i > budget_j but W(i, j) <= 1/2.
std::vector<std::pair<std::size_t, std::size_t>> budget_transitivity_violations(
    const OutcomeMatrix& w, std::span<const double> budgets);

// Face value v becomes a unit block on [v - 1, v]; every die gets equal
// population weight. Throws std::invalid_argument for empty dice, unequal
// face counts or faces below 1.
EquilibriumSolution dice_to_population(const std::vector<std::vector<int>>& dice);

// Budget-neutral slice swaps between members of one league: one member
// hands uniform slices on two outer cells of the league's flat span to
// another and takes back a uniform slice on a cell between them, sized so
// that both keep mass and mean. The aggregate is untouched. Cells come from
// the members' breakpoints, each cut in four. Expected outcomes inside the
// league are visited in a seed-shuffled order and pushed greedily towards
// reversal; slice fractions are drawn from `seed`. Stops at the first
// reversal.
//
// Throws std::invalid_argument if the league has fewer than two members or
// no two members overlap, std::runtime_error if no swap changes outcomes
// (a two-member league cannot move: W is pinned by the members' means).
EquilibriumSolution league_rewire(const EquilibriumSolution& sol, std::size_t league,
                                  std::uint64_t seed, double tol = kTolerance);

// Edge i -> j whenever W(j, i) >= 1/2 (endorsement toward the expected
// winner), flagged certain when W(j, i) >= 1 - tol. Leagues become
// clusters in DOT output.
std::string export_digraph(const OutcomeMatrix& w, const LeaguePartition& partition,
                           std::span<const double> budgets, GraphFormat format,
                           double tol = kTolerance);

// Step samples "series,x,value" for the aggregate and every strategy.
std::string plot_csv(const EquilibriumSolution& sol);

}  // namespace poplotto
