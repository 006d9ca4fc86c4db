#include "resmatch/cop.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace resmatch {

ProposalOrder default_order(const Market& market) {
  ProposalOrder order;
  order.sequence.resize(market.individuals.size());
  std::iota(order.sequence.begin(), order.sequence.end(), 0);
  std::sort(order.sequence.begin(), order.sequence.end(),
            [&](IndividualIndex a, IndividualIndex b) {
              return market.individuals[a].id < market.individuals[b].id;
            });
  return order;
}

CopResult cumulative_offer(const ChoiceRule& rule, const ProposalOrder& order) {
  const Market& market = rule.market();
  const std::size_t n = market.individuals.size();
  {
    std::vector<IndividualIndex> check = order.sequence;
    std::sort(check.begin(), check.end());
    bool permutation = check.size() == n;
    for (std::size_t k = 0; k < check.size() && permutation; ++k) permutation = check[k] == k;
    if (!permutation)
      throw std::invalid_argument("proposal order is not a permutation of the individuals");
  }

  std::vector<std::vector<Contract>> proposals(n);
  std::size_t universe = 0;
  for (IndividualIndex i = 0; i < n; ++i) {
    proposals[i] = contracts_of(market, i);
    universe += proposals[i].size();
  }

  std::vector<std::size_t> next(n, 0);
  std::vector<std::vector<Contract>> available(market.institutions.size());
  std::vector<std::vector<Contract>> held(market.institutions.size());
  std::vector<int> holding(n, 0);

  CopResult result;
  const std::size_t step_limit = universe + 1;
  while (true) {
    auto proposer = std::find_if(order.sequence.begin(), order.sequence.end(),
                                 [&](IndividualIndex i) {
                                   return holding[i] == 0 && next[i] < proposals[i].size();
                                 });
    if (proposer == order.sequence.end()) break;
    if (result.trace.steps.size() >= step_limit)
      throw std::logic_error("cumulative offer process exceeded its step bound");

    const IndividualIndex i = *proposer;
    const Contract x = proposals[i][next[i]++];
    const InstitutionIndex s = x.institution;

    CopStep step;
    step.index = result.trace.steps.size() + 1;
    step.proposer = i;
    step.proposed = x;

    std::vector<Contract> before = held[s];
    before.push_back(x);
    available[s].push_back(x);
    std::sort(available[s].begin(), available[s].end());
    held[s] = rule.chosen(s, available[s]);

    for (const auto& y : before) {
      if (!std::binary_search(held[s].begin(), held[s].end(), y)) {
        step.rejected.push_back(y);
      }
    }
    std::fill(holding.begin(), holding.end(), 0);
    for (const auto& d : held)
      for (const auto& y : d) ++holding[y.individual];

    step.available = available[s];
    step.held = held[s];
    result.trace.steps.push_back(std::move(step));
  }

  for (const auto& d : held) result.matching.insert(result.matching.end(), d.begin(), d.end());
  std::sort(result.matching.begin(), result.matching.end());
  return result;
}

CopResult cumulative_offer(const Market& market, ChoicePolicy policy, const ProposalOrder& order) {
  return cumulative_offer(ChoiceRule(market, policy), order);
}

CopResult cumulative_offer(const ChoiceRule& rule) {
  return cumulative_offer(rule, default_order(rule.market()));
}

std::vector<CopSnapshot> replay(const CopTrace& trace, std::size_t institution_count) {
  std::vector<CopSnapshot> out;
  CopSnapshot state{std::vector<std::vector<Contract>>(institution_count),
                    std::vector<std::vector<Contract>>(institution_count)};
  for (const auto& step : trace.steps) {
    const InstitutionIndex s = step.proposed.institution;
    state.available.at(s) = step.available;
    state.held.at(s) = step.held;
    out.push_back(state);
  }
  return out;
}

}  // namespace resmatch
