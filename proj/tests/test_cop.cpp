#include "doctest.h"
#include "resmatch/cop.hpp"
#include "support.hpp"

using namespace testing;

TEST_CASE("both individuals preferring the SC seat") {
  const Market m = independence_market();  // (s,SC) ranked above (s,GC) by both
  const Contract i_gc{0, 0, Category::GC}, i_sc{0, 0, Category::SC};
  const Contract j_gc{1, 0, Category::GC}, j_sc{1, 0, Category::SC};
  const ChoiceRule rule(m, ChoicePolicy::NoTransfer);
  const auto result = cumulative_offer(rule, ProposalOrder{{0, 1}});
  CHECK(result.matching == sorted({i_sc, j_gc}));

  REQUIRE(result.trace.steps.size() == 3);
  const auto& s = result.trace.steps;
  CHECK(s[0].index == 1);
  CHECK(s[0].proposed == i_sc);
  CHECK(s[0].held == std::vector<Contract>{i_sc});
  CHECK(s[1].proposed == j_sc);
  CHECK(s[1].rejected == std::vector<Contract>{j_sc});
  CHECK(s[1].held == std::vector<Contract>{i_sc});
  CHECK(s[2].proposed == j_gc);
  CHECK(s[2].available == sorted({i_sc, j_gc, j_sc}));
  CHECK(s[2].held == sorted({i_sc, j_gc}));

  // j first gives the same matching.
  CHECK(cumulative_offer(rule, ProposalOrder{{1, 0}}).matching == result.matching);
}

TEST_CASE("unique choices with ample seats") {
  Market m;
  for (int k = 0; k < 3; ++k) {
    Institution s;
    s.id = "s" + std::to_string(k);
    s.capacity = 3;
    s.scores = {3, 2, 1};
    m.institutions.push_back(s);
  }
  for (int k = 0; k < 3; ++k) {
    Individual ind;
    ind.id = "i" + std::to_string(k);
    ind.preferences = {{static_cast<InstitutionIndex>(2 - k), Category::GC}};
    m.individuals.push_back(ind);
  }
  const auto r = cumulative_offer(m, ChoicePolicy::NoTransfer, default_order(m));
  CHECK(r.matching == sorted({{0, 2, Category::GC}, {1, 1, Category::GC}, {2, 0, Category::GC}}));
  CHECK(r.trace.steps.size() == 3);
  for (const auto& step : r.trace.steps) CHECK(step.rejected.empty());
}

TEST_CASE("an empty preference list never proposes") {
  Market m = independence_market();
  m.individuals[1].preferences.clear();
  const auto r = cumulative_offer(m, ChoicePolicy::NoTransfer, default_order(m));
  CHECK_FALSE(assignment_of(r.matching, 1));
  for (const auto& step : r.trace.steps) CHECK(step.proposer != 1);
}

TEST_CASE("default order sorts by id") {
  Market m;
  for (const char* id : {"b", "a", "c"}) {
    Individual ind;
    ind.id = id;
    m.individuals.push_back(ind);
  }
  CHECK(default_order(m).sequence == std::vector<IndividualIndex>{1, 0, 2});
  m.individuals.resize(1);
  CHECK(default_order(m).sequence == std::vector<IndividualIndex>{0});
  CHECK(default_order(Market{}).sequence.empty());
  CHECK(cumulative_offer(Market{}, ChoicePolicy::NoTransfer, ProposalOrder{}).matching.empty());
}

TEST_CASE("orders must be permutations") {
  const ChoiceRule rule(independence_market(), ChoicePolicy::NoTransfer);
  CHECK_THROWS_AS(cumulative_offer(rule, ProposalOrder{{0}}), std::invalid_argument);
  CHECK_THROWS_AS(cumulative_offer(rule, ProposalOrder{{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(cumulative_offer(rule, ProposalOrder{{0, 2}}), std::invalid_argument);
}

TEST_CASE("trace invariants on random markets") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const Market m = generate_market(small_markets(), seed);
    for (ChoicePolicy policy : kAllPolicies) {
      const ChoiceRule rule(m, policy);
      const auto r = cumulative_offer(rule);
      CHECK(is_feasible(r.matching, m));
      CHECK(r.trace.steps.size() <= build_contract_universe(m).size());

      const auto snapshots = replay(r.trace, m.institutions.size());
      REQUIRE(snapshots.size() == r.trace.steps.size());
      std::vector<std::vector<Contract>> previous(m.institutions.size());
      for (std::size_t l = 0; l < snapshots.size(); ++l) {
        std::vector<int> holding(m.individuals.size(), 0);
        for (InstitutionIndex s = 0; s < m.institutions.size(); ++s) {
          const auto& a = snapshots[l].available[s];
          // Available sets only grow.
          CHECK(std::includes(a.begin(), a.end(), previous[s].begin(), previous[s].end()));
          previous[s] = a;
          // Held sets are the institution's choice from what is available.
          CHECK(snapshots[l].held[s] == rule.chosen(s, a));
          for (const auto& c : snapshots[l].held[s]) ++holding[c.individual];
        }
        for (int count : holding) CHECK(count <= 1);
      }
      if (!snapshots.empty()) {
        std::vector<Contract> last;
        for (const auto& held : snapshots.back().held) last.insert(last.end(), held.begin(), held.end());
        CHECK(sorted(last) == r.matching);
      }
    }
  }
}

TEST_CASE("the result does not depend on the proposal order") {
  GeneratorParams p = small_markets();
  p.individuals = 5;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Market m = generate_market(p, seed);
    const ChoiceRule rule(m, ChoicePolicy::TransferMerit);
    const auto reference = cumulative_offer(rule).matching;
    ProposalOrder order = default_order(m);
    std::sort(order.sequence.begin(), order.sequence.end());
    do {
      CHECK(cumulative_offer(rule, order).matching == reference);
    } while (std::next_permutation(order.sequence.begin(), order.sequence.end()));
  }
}
