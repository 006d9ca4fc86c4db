#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resmatch/model.hpp"
#include "resmatch/subchoice.hpp"

namespace resmatch {

// What happens to OBC seats left vacant after the reserved stages.
enum class ChoicePolicy {
  NoTransfer,     // they stay vacant
  TransferToGC,   // they go to remaining GC-term offers by score
  TransferMerit,  // they go to all remaining offers by score
};

inline constexpr std::array<ChoicePolicy, 3> kAllPolicies{
    ChoicePolicy::NoTransfer, ChoicePolicy::TransferToGC, ChoicePolicy::TransferMerit};

std::string_view to_string(ChoicePolicy p);
std::optional<ChoicePolicy> parse_policy(std::string_view text);

// Seeded defects, used to measure whether the audit checks can see them.
struct ChoiceFaults {
  // Individuals chosen in the GC stage keep their other contracts.
  bool keep_open_selections = false;
  // The OBC stage runs ahead of the GC stage.
  bool obc_before_open = false;
  // This horizontal type's reservation is read as zero by the sub-choice rule.
  std::optional<TypeIndex> ignored_reservation;
  // Individuals who declare a reserved category are kept out of the GC stage.
  bool open_excludes_declared = false;

  bool any() const {
    return keep_open_selections || obc_before_open || ignored_reservation || open_excludes_declared;
  }
  friend bool operator==(const ChoiceFaults&, const ChoiceFaults&) = default;
};

std::string to_string(const ChoiceFaults& faults);

struct ChoiceStage {
  std::string label;  // "GC", "SC", "ST", "OBC", "OBC->GC" or "OBC->Merit"
  int capacity = 0;
  std::vector<Contract> considered;
  std::vector<Contract> chosen;

  int vacancies() const { return capacity - static_cast<int>(chosen.size()); }
};

struct ChoiceOutcome {
  std::vector<Contract> chosen;  // sorted
  std::vector<ChoiceStage> stages;

  const ChoiceStage* stage(std::string_view label) const;
  // Seats moved out of OBC into the final stage.
  int transferred() const;
};

// An institution's overall choice rule: GC first, then SC, ST and OBC, then
// the policy's transfer stage. Selecting an individual in any stage removes
// their other contracts from the later stages.
//
// Throws std::invalid_argument for offers to another institution or repeated
// (individual, category) offers.
ChoiceOutcome overall_choice(std::span<const Contract> offered, InstitutionIndex institution,
                             const Market& market, const HorizontalHierarchy& hierarchy,
                             ChoicePolicy policy, const ChoiceFaults& faults = {});

// A market together with the choice rule every institution runs.
class ChoiceRule {
 public:
  ChoiceRule(Market market, ChoicePolicy policy, ChoiceFaults faults = {});

  const Market& market() const { return *market_; }
  const HorizontalHierarchy& hierarchy() const { return *hierarchy_; }
  ChoicePolicy policy() const { return policy_; }
  const ChoiceFaults& faults() const { return faults_; }

  ChoiceOutcome choose(InstitutionIndex institution, std::span<const Contract> offered) const;
  std::vector<Contract> chosen(InstitutionIndex institution,
                               std::span<const Contract> offered) const;

  // The sub-choice rule as this rule applies it (faults included).
  std::vector<Contract> sub_choice(SubChoiceInput input) const;

  // Same policy and faults over a different market.
  ChoiceRule rebind(Market market) const { return ChoiceRule(std::move(market), policy_, faults_); }

 private:
  std::shared_ptr<const Market> market_;
  std::shared_ptr<const HorizontalHierarchy> hierarchy_;
  ChoicePolicy policy_;
  ChoiceFaults faults_;
};

struct UnfairRejection {
  Contract rejected;  // an offer of an individual with nothing chosen
  Contract chosen;    // a chosen contract the rejected one outranks in its category
};

// Fairness of a chosen set: when every offer of an individual is rejected,
// each chosen contract must belong to someone with a higher score, carry a
// different category, or hold a horizontal type the rejected one lacks.
std::vector<UnfairRejection> unfair_rejections(std::span<const Contract> offered,
                                               std::span<const Contract> chosen,
                                               InstitutionIndex institution, const Market& market,
                                               const HorizontalHierarchy& hierarchy);

// Applicant counts per category: GC-only applicants, then SC, ST and OBC
// members (who apply under both GC and their category).
using DemandProfile = std::array<int, kCategoryCount>;

struct TransferViolation {
  DemandProfile low;
  DemandProfile high;
  std::string detail;
};

struct TransferReport {
  std::size_t profiles = 0;
  std::size_t comparisons = 0;
  std::vector<TransferViolation> violations;

  bool ok() const { return violations.empty(); }
};

// Per-stage capacities and vacancies the institution's rule produces when
// faced with the given demand.
std::vector<ChoiceStage> stage_capacities(const Institution& institution, ChoicePolicy policy,
                                          const DemandProfile& demand,
                                          const ChoiceFaults& faults = {});

// Capacity transfers must be monotone: more vacancies in every earlier stage
// never shrink a later stage's capacity, and more demand never shrinks the
// seats reachable up to any stage.
TransferReport check_monotone_transfer(ChoicePolicy policy, const Institution& institution,
                                       std::span<const DemandProfile> profiles,
                                       const ChoiceFaults& faults = {});

// Every profile componentwise <= bound.
std::vector<DemandProfile> demand_grid(const DemandProfile& bound);

}  // namespace resmatch
