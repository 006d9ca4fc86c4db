#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resmatch/choice.hpp"
#include "resmatch/cop.hpp"
#include "resmatch/model.hpp"

namespace resmatch {

// ---------------------------------------------------------------------------
// Fairness of matchings

struct EnvyViolation {
  Contract envious;  // the envious individual's contract
  Contract envied;   // the preferred contract, held by someone outranked
};

// Envy between matched individuals is justified only by a higher score at
// the envied institution or by a horizontal type the envier lacks.
std::vector<EnvyViolation> unjustified_envy(std::span<const Contract> matching,
                                            const Market& market,
                                            const HorizontalHierarchy& hierarchy);
std::vector<EnvyViolation> unjustified_envy(std::span<const Contract> matching,
                                            const Market& market);

// ---------------------------------------------------------------------------
// Stability

struct BlockSearch {
  // Largest blocking set tried when the search is not exhaustive.
  std::size_t max_block_size = 1;
  // Try every blocking set when there are at most `exhaustive_limit` candidates.
  bool escalate = false;
  std::size_t exhaustive_limit = 12;
};

struct BlockReport {
  // Institutions whose choice from their own assignment drops something.
  std::vector<InstitutionIndex> rejecting_institutions;
  // Individuals assigned a pair they rank below the outside option.
  std::vector<IndividualIndex> unacceptable;
  std::optional<std::vector<Contract>> blocking_set;
  // Contracts outside the matching that their individual prefers to its assignment.
  std::size_t candidates = 0;
  std::size_t searched_size = 0;
  bool exhaustive = false;

  bool individually_rational() const { return rejecting_institutions.empty() && unacceptable.empty(); }
  bool stable() const { return individually_rational() && !blocking_set; }
};

// Individual rationality plus a search for a blocking set Z: contracts
// outside the matching, at most one per individual, each strictly preferred
// by its individual, with every institution in Z choosing all of its part of
// Z from its assignment plus Z. Contracts no one prefers to its assignment
// can never block, so only the others are searched.
BlockReport find_block(std::span<const Contract> matching, const ChoiceRule& rule,
                       const BlockSearch& search = {});

// ---------------------------------------------------------------------------
// Strategy-proofness

inline constexpr std::size_t kMisreportPairLimit = 4;

struct Deviation {
  IndividualIndex individual = 0;
  std::vector<Position> report;
  bool declares = false;
  std::optional<Position> truthful_outcome;
  std::optional<Position> misreport_outcome;
};

// Every strict ranking of every subset of `pairs`, the empty one included.
std::vector<std::vector<Position>> ordered_subsets(std::span<const Position> pairs);

// Looks for a report that gets the individual a pair truly preferred.
//
// Reports range over rankings of subsets of the individual's eligible pairs when there are
// at most kMisreportPairLimit of them, and of the acceptable pairs otherwise.
// A report without reserved pairs is a non-declaration of the category.
// Throws std::length_error when even the acceptable pairs exceed the limit.
std::optional<Deviation> find_profitable_deviation(const ChoiceRule& rule, IndividualIndex who);

// ---------------------------------------------------------------------------
// Respect for improvements

struct ImprovementSpec {
  IndividualIndex individual = 0;
  std::vector<double> scores;  // new score at each institution
};

// Throws std::invalid_argument unless the new scores are at least the old
// ones everywhere, strictly higher somewhere, and tie no one.
Market apply_improvement(const Market& market, const ImprovementSpec& improvement);

// The improved individual's outcome under the new scores is at least as good
// as before, by the individual's own ranking.
bool respects_improvement(const ChoiceRule& rule, const ImprovementSpec& improvement);

// ---------------------------------------------------------------------------
// Fairness and stability are independent

struct IndependenceReport {
  Market market;
  ChoicePolicy policy = ChoicePolicy::NoTransfer;
  IndividualIndex higher = 0;  // better-scoring individual
  IndividualIndex lower = 0;
  std::vector<Contract> fair_matching;    // both on GC terms
  std::vector<Contract> stable_matching;  // higher on GC, lower on SC
  std::vector<Contract> block_offers;     // fair matching plus the lower one's SC contract
  std::vector<Contract> block_choice;     // institution's choice from block_offers
  bool fair_is_fair = false;
  bool fair_is_blocked = false;
  std::optional<std::vector<Contract>> fair_blocking_set;
  bool stable_is_stable = false;
  bool stable_is_fair = false;

  bool holds() const { return fair_is_fair && fair_is_blocked && stable_is_stable && !stable_is_fair; }
  std::string summary() const;
};

// One institution, two SC individuals i and j who both prefer the SC seat,
// one open seat and one SC seat. `swap_scores` gives j the higher score.
Market independence_market(bool swap_scores = false);
IndependenceReport independence_counterexample(ChoicePolicy policy = ChoicePolicy::NoTransfer,
                                               bool swap_scores = false);

}  // namespace resmatch
