#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "resmatch/choice.hpp"
#include "resmatch/generator.hpp"

namespace resmatch {

struct Counterexample {
  std::string what;
  std::string market;  // instance JSON, empty when the case has no market
};

struct CheckResult {
  std::string name;
  std::string property;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  std::vector<Counterexample> counterexamples;
  double seconds = 0;

  bool passed() const { return failures == 0 && cases > 0; }
};

struct AuditConfig {
  std::uint64_t seed = 20240917;
  GeneratorParams generator = default_audit_generator();
  std::size_t markets = 200;
  std::vector<ChoicePolicy> policies{kAllPolicies.begin(), kAllPolicies.end()};
  ChoiceFaults faults;

  // Sub-choice oracle comparison over every small input.
  std::size_t oracle_max_individuals = 6;
  int oracle_max_capacity = 3;
  int oracle_max_reserve = 3;
  // Substitutability and friends: exhaustive part plus random probes.
  std::size_t property_exhaustive_individuals = 5;
  std::size_t property_probes = 10000;
  std::size_t property_max_individuals = 8;

  // Singleton blocks only unless set; then every block on small candidate sets.
  bool exhaustive_blocks = false;
  std::size_t improvements_per_market = 1;
  std::size_t order_markets = 200;
  std::size_t order_max_individuals = 5;
  DemandProfile demand_bound{3, 3, 3, 3};

  std::size_t max_counterexamples = 3;

  static GeneratorParams default_audit_generator();
};

struct AuditReport {
  AuditConfig config;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  std::string to_json() const;
};

// The sub-choice rule agrees with the exhaustive undominated selection on
// every input up to the configured size, over four type structures.
CheckResult check_subchoice_oracle(const AuditConfig& config);
// Substitutability, size and quota monotonicity, irrelevance of rejected
// contracts, and fairness of the sub-choice rule.
CheckResult check_subchoice_properties(const AuditConfig& config);
// Every choice made during the cumulative offer process is feasible and fair.
CheckResult check_choice_fairness(const AuditConfig& config);
// Outcomes are feasible and free of unjustified envy.
CheckResult check_matching_fairness(const AuditConfig& config);
// Outcomes are individually rational and unblocked.
CheckResult check_stability(const AuditConfig& config);
// No individual gains from any report over their eligible pairs.
CheckResult check_strategy_proofness(const AuditConfig& config);
// Higher scores never hurt.
CheckResult check_improvements(const AuditConfig& config);
// Declaring a reserved category or a horizontal type never hurts.
CheckResult check_declarations(const AuditConfig& config);
// The outcome does not depend on the proposal order.
CheckResult check_order_invariance(const AuditConfig& config);
// Vacancy transfers between stages are monotone.
CheckResult check_transfer_monotonicity(const AuditConfig& config);
// A fair unstable matching and a stable unfair one exist.
CheckResult check_independence(const AuditConfig& config);

AuditReport run_audit(const AuditConfig& config);

}  // namespace resmatch
