#pragma once

#include <span>
#include <string>
#include <vector>

#include "resmatch/model.hpp"

namespace resmatch {

enum class Domination { FirstDominates, SecondDominates, Equal, Incomparable };

std::string_view to_string(Domination d);

// Merit-based comparison of two equally sized sets of individuals.
//
// A set A dominates B when some bijection g: A -> B has score(a) >= score(g(a))
// for every a, strictly for at least one. Such a bijection exists iff the
// scores of A sorted in descending order are position-wise at least those of B
// sorted the same way: pairing the k-th best of A with the k-th best of B is
// optimal, since any bijection that maps some a to a better b than the
// rank-matched one forces another member of A onto a worse partner than its
// rank-mate (a Hall-type exchange argument). So the relation reduces to a
// position-wise comparison of sorted score vectors.
//
// Throws std::invalid_argument if the sizes differ.
Domination merit_compare(std::span<const IndividualIndex> first,
                         std::span<const IndividualIndex> second, std::span<const double> scores);

// One category's worth of offers at one institution.
struct SubChoiceInput {
  // All share an institution and a category, one per individual.
  std::vector<Contract> contracts;
  int capacity = 0;
  // Horizontal reservations, indexed by type; missing entries count as zero.
  std::vector<int> reservations;
  // Scores at this institution, indexed by individual.
  std::span<const double> scores;
  const HorizontalHierarchy* hierarchy = nullptr;
};

struct SubChoiceDiagnostics {
  std::vector<std::string> messages;
};

// The hierarchical sub-choice rule.
//
// Horizontal types are processed bottom-up through the containment order.
// Each type takes the best-scoring remaining holders up to its (adjusted)
// reservation; the count taken is charged against every containing type and
// against the seats left. Seats still open after the last type go to the
// highest remaining scores. Types with identical holder sets act as one type
// whose reservation is the largest among them.
std::vector<Contract> c_hier(const SubChoiceInput& input,
                             SubChoiceDiagnostics* diagnostics = nullptr);

// Every reserved type is either met or has no holder left unchosen.
bool satisfies_horizontal(std::span<const Contract> chosen, const SubChoiceInput& input);

inline constexpr std::size_t kOracleLimit = 20;

// Exhaustive reference: among reservation-satisfying subsets of size
// min(|contracts|, capacity), the merit-undominated ones.
std::vector<std::vector<Contract>> undominated_selections(const SubChoiceInput& input);

// The unique undominated selection. Throws std::length_error beyond
// kOracleLimit contracts and std::logic_error when no unique one exists.
std::vector<Contract> oracle_undominated(const SubChoiceInput& input);

}  // namespace resmatch
