#pragma once

#include <span>
#include <vector>

#include "resmatch/choice.hpp"
#include "resmatch/model.hpp"

namespace resmatch {

// Priority over individuals for picking the next proposer.
struct ProposalOrder {
  std::vector<IndividualIndex> sequence;
};

// Individuals sorted by id.
ProposalOrder default_order(const Market& market);

struct CopStep {
  std::size_t index = 0;  // 1-based
  IndividualIndex proposer = 0;
  Contract proposed;
  // State of the receiving institution after the step; the others are unchanged.
  std::vector<Contract> available;
  std::vector<Contract> held;
  // Contracts held before the step (or just proposed) that are not held after it.
  std::vector<Contract> rejected;
};

struct CopTrace {
  std::vector<CopStep> steps;
};

struct CopResult {
  std::vector<Contract> matching;  // sorted
  CopTrace trace;
};

// Cumulative offer process, one proposal per step. The first individual in
// `order` who holds nothing and still has an unproposed acceptable contract
// proposes the best such contract; the receiving institution keeps its choice
// from every offer it has ever received.
//
// Throws std::invalid_argument if `order` is not a permutation of the
// individuals and std::logic_error if the step bound is exceeded.
CopResult cumulative_offer(const ChoiceRule& rule, const ProposalOrder& order);
CopResult cumulative_offer(const Market& market, ChoicePolicy policy, const ProposalOrder& order);
CopResult cumulative_offer(const ChoiceRule& rule);

// Per-institution available and held sets after each step, rebuilt from a trace.
struct CopSnapshot {
  std::vector<std::vector<Contract>> available;
  std::vector<std::vector<Contract>> held;
};
std::vector<CopSnapshot> replay(const CopTrace& trace, std::size_t institution_count);

}  // namespace resmatch
