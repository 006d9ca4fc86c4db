#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace resmatch {

using IndividualIndex = std::size_t;
using InstitutionIndex = std::size_t;
using TypeIndex = std::size_t;

// GC is the open category. The others are the reserved (vertical) categories,
// listed in the order institutions process them.
enum class Category : std::uint8_t { GC = 0, SC = 1, ST = 2, OBC = 3 };

inline constexpr std::size_t kCategoryCount = 4;
inline constexpr std::array<Category, 3> kReservedCategories{Category::SC, Category::ST,
                                                             Category::OBC};
inline constexpr std::array<Category, 4> kAllCategories{Category::GC, Category::SC, Category::ST,
                                                        Category::OBC};

constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }
constexpr bool is_reserved(Category c) { return c != Category::GC; }

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view text);

// An (institution, category) pair: one entry of an individual's preference list.
struct Position {
  InstitutionIndex institution = 0;
  Category category = Category::GC;

  friend auto operator<=>(const Position&, const Position&) = default;
};

struct Contract {
  IndividualIndex individual = 0;
  InstitutionIndex institution = 0;
  Category category = Category::GC;

  Position position() const { return {institution, category}; }
  friend auto operator<=>(const Contract&, const Contract&) = default;
};

struct HorizontalType {
  std::string id;
  std::string label;

  friend bool operator==(const HorizontalType&, const HorizontalType&) = default;
};

struct Individual {
  std::string id;
  // Reserved category the individual actually belongs to, if any.
  std::optional<Category> membership;
  // Reserved category claimed. The engine only ever sees this one.
  std::optional<Category> declared;
  // Sorted, duplicate free. Empty means "no horizontal type".
  std::vector<TypeIndex> horizontal_types;
  // Strict order; anything not listed ranks below the outside option.
  std::vector<Position> preferences;

  // Rank in the preference list, or nullopt if unacceptable.
  std::optional<std::size_t> rank_of(Position p) const;
  // True iff `a` is strictly preferred to `b`; nullopt stands for the outside option.
  bool prefers(std::optional<Position> a, std::optional<Position> b) const;
  bool can_claim(Category c) const { return c == Category::GC || declared == c; }

  friend bool operator==(const Individual&, const Individual&) = default;
};

struct Institution {
  std::string id;
  int capacity = 0;
  // Seats set aside per category; the GC slot is unused (open seats are derived).
  std::array<int, kCategoryCount> vertical_reservations{};
  // Merit score per individual index. NaN marks a missing score.
  std::vector<double> scores;
  // Horizontal reservations per category, indexed by horizontal type.
  std::array<std::vector<int>, kCategoryCount> horizontal_reservations;

  int open_capacity() const;
  int category_capacity(Category c) const;
  double score(IndividualIndex i) const { return scores.at(i); }
  int horizontal_reservation(Category c, TypeIndex t) const;

  friend bool operator==(const Institution&, const Institution&) = default;
};

struct Market {
  std::vector<HorizontalType> horizontal_types;
  std::vector<Individual> individuals;
  std::vector<Institution> institutions;

  std::optional<IndividualIndex> find_individual(std::string_view id) const;
  std::optional<InstitutionIndex> find_institution(std::string_view id) const;
  std::optional<TypeIndex> find_type(std::string_view id) const;

  friend bool operator==(const Market&, const Market&) = default;
};

// Holder sets of the horizontal types and the containment order they induce.
//
// Types whose holder sets coincide form one equivalence class. Classes are
// ordered bottom-up in layers: layer 0 holds classes containing no other
// class, layer n+1 the classes whose strictly contained classes all sit in
// layers <= n.
class HorizontalHierarchy {
 public:
  HorizontalHierarchy() = default;
  HorizontalHierarchy(std::size_t type_count,
                      std::span<const std::vector<TypeIndex>> individual_types);
  explicit HorizontalHierarchy(const Market& market);

  std::size_t type_count() const { return holders_.size(); }
  std::size_t individual_count() const { return types_of_.size(); }

  const std::vector<IndividualIndex>& holders(TypeIndex t) const;
  const std::vector<TypeIndex>& types_of(IndividualIndex i) const { return types_of_.at(i); }
  bool holds(IndividualIndex i, TypeIndex t) const;

  // Strict containment: every holder of `inner` holds `outer`, and the sets differ.
  // Throws std::out_of_range on an unknown type.
  bool contains(TypeIndex outer, TypeIndex inner) const;

  // Pairs of types whose holder sets overlap without either containing the other.
  std::vector<std::pair<TypeIndex, TypeIndex>> broken_pairs() const;
  bool is_hierarchical() const { return broken_pairs().empty(); }

  // rho(a) is a superset of rho(b).
  bool covers(IndividualIndex a, IndividualIndex b) const;

  struct TypeClass {
    std::vector<TypeIndex> members;  // ascending
    std::size_t layer = 0;
  };
  // Sorted by (layer, smallest member).
  const std::vector<TypeClass>& classes() const { return classes_; }
  std::size_t class_of(TypeIndex t) const { return class_of_.at(t); }
  // Strict containment between classes.
  bool class_contains(std::size_t outer, std::size_t inner) const;

 private:
  void build();

  std::vector<std::vector<IndividualIndex>> holders_;
  std::vector<std::vector<TypeIndex>> types_of_;
  std::vector<TypeClass> classes_;
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<bool>> class_contains_;
};

struct Violation {
  std::string kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  // Set when applicability was checked greedily rather than over every subset.
  bool applicability_exhaustive = true;

  bool ok() const { return violations.empty(); }
};

// Largest market size for which applicability is checked over every subset.
inline constexpr std::size_t kExhaustiveApplicabilityLimit = 15;

ValidationReport validate_market(const Market& market);

// Smallest number of seats a subset of `pool` needs so that every horizontal
// reservation is met or exhausted. Reservations are indexed by type.
int minimum_reserved_seats(const HorizontalHierarchy& hierarchy,
                           std::span<const IndividualIndex> pool, std::span<const int> reserves);

// True iff every subset of the market's individuals admits a reservation
// satisfying selection within `capacity` seats.
bool reservations_applicable(const HorizontalHierarchy& hierarchy, std::span<const int> reserves,
                             int capacity, bool exhaustive);

bool contains(const Market& market, std::string_view outer, std::string_view inner);

// Every contract an individual can be matched through: one per acceptable
// preference entry, restricted to declared categories.
std::vector<Contract> build_contract_universe(const Market& market);

std::vector<Contract> contracts_of(const Market& market, IndividualIndex i);

// At most one contract per individual, at most the capacity per institution.
bool is_feasible(std::span<const Contract> matching, const Market& market);

// The individual's assignment in a matching, if any.
std::optional<Position> assignment_of(std::span<const Contract> matching, IndividualIndex i);

std::string describe(const Market& market, const Contract& c);

// Separates equal scores at each institution so that the individual with the
// smaller id ranks higher. Other score comparisons are unchanged.
Market break_score_ties(Market market);

}  // namespace resmatch
