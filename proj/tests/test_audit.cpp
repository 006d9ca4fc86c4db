#include "doctest.h"
#include "json.hpp"
#include "resmatch/audit_suite.hpp"
#include "resmatch/cop.hpp"
#include "support.hpp"

using namespace testing;

namespace {

const Contract i_gc{0, 0, Category::GC}, i_sc{0, 0, Category::SC};
const Contract j_gc{1, 0, Category::GC}, j_sc{1, 0, Category::SC};

}  // namespace

TEST_CASE("envy in the two-individual market") {
  const Market m = independence_market();
  const auto z = unjustified_envy(sorted({i_gc, j_sc}), m);
  REQUIRE(z.size() == 1);
  CHECK(z[0].envious == i_gc);
  CHECK(z[0].envied == j_sc);
  CHECK(unjustified_envy(sorted({i_gc, j_gc}), m).empty());
  CHECK(unjustified_envy(std::vector<Contract>{}, m).empty());
}

TEST_CASE("envy is justified by a missing horizontal type") {
  Market m = independence_market();
  m.horizontal_types = {{"women", "Women"}};
  m.individuals[1].horizontal_types = {0};
  for (auto& row : m.institutions[0].horizontal_reservations) row.assign(1, 0);
  CHECK(unjustified_envy(sorted({i_gc, j_sc}), m).empty());
}

TEST_CASE("blocks in the two-individual market") {
  const ChoiceRule rule(independence_market(), ChoicePolicy::NoTransfer);
  BlockSearch exhaustive;
  exhaustive.escalate = true;

  const auto y = find_block(sorted({i_gc, j_gc}), rule);
  REQUIRE(y.blocking_set);
  CHECK(*y.blocking_set == std::vector<Contract>{j_sc});
  CHECK(rule.chosen(0, sorted({i_gc, j_gc, j_sc})) == sorted({i_gc, j_sc}));
  // The institution alone would also drop j_gc.
  CHECK(y.rejecting_institutions == std::vector<InstitutionIndex>{0});
  CHECK_FALSE(y.stable());

  const auto z = find_block(sorted({i_gc, j_sc}), rule, exhaustive);
  CHECK(z.individually_rational());
  CHECK_FALSE(z.blocking_set);
  CHECK(z.exhaustive);
  CHECK(z.stable());
  // {i_sc} alone fails: choosing i_gc drops i's i_sc.
  CHECK(rule.chosen(0, sorted({i_gc, i_sc, j_sc})) == sorted({i_gc, j_sc}));
}

TEST_CASE("exhaustive block search agrees with brute force on tiny markets") {
  GeneratorParams p = small_markets();
  p.individuals = 4;
  p.institutions = 2;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Market m = generate_market(p, seed);
    const ChoiceRule rule(m, ChoicePolicy::NoTransfer);
    const auto universe = build_contract_universe(m);
    if (universe.size() > 10) continue;
    // Every subset of the universe as a candidate matching.
    for (std::uint32_t mask = 0; mask < (1u << universe.size()); ++mask) {
      std::vector<Contract> x;
      for (std::size_t k = 0; k < universe.size(); ++k)
        if (mask >> k & 1u) x.push_back(universe[k]);
      if (!is_feasible(x, m)) continue;
      BlockSearch search;
      search.escalate = true;
      search.exhaustive_limit = 64;
      const auto report = find_block(x, rule, search);

      // Brute force: any nonempty Z outside X, one per individual, each
      // strictly preferred, chosen wherever it lands.
      bool blocked = false;
      for (std::uint32_t zmask = 1; zmask < (1u << universe.size()) && !blocked; ++zmask) {
        if (zmask & mask) continue;
        std::vector<Contract> z;
        for (std::size_t k = 0; k < universe.size(); ++k)
          if (zmask >> k & 1u) z.push_back(universe[k]);
        bool ok = true;
        std::vector<int> seen(m.individuals.size(), 0);
        for (const auto& c : z) {
          ok = ok && ++seen[c.individual] == 1 &&
               m.individuals[c.individual].prefers(c.position(), assignment_of(x, c.individual));
        }
        for (InstitutionIndex s = 0; ok && s < m.institutions.size(); ++s) {
          std::vector<Contract> offers, mine;
          for (const auto& c : x)
            if (c.institution == s) offers.push_back(c);
          for (const auto& c : z)
            if (c.institution == s) mine.push_back(c);
          if (mine.empty()) continue;
          offers.insert(offers.end(), mine.begin(), mine.end());
          const auto chosen = rule.chosen(s, sorted(offers));
          for (const auto& c : mine) ok = ok && std::binary_search(chosen.begin(), chosen.end(), c);
        }
        blocked = ok;
      }
      CHECK(report.blocking_set.has_value() == blocked);
    }
  }
}

TEST_CASE("outcomes are stable") {
  BlockSearch search;
  search.escalate = true;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Market m = generate_market(small_markets(), seed);
    for (ChoicePolicy p : kAllPolicies) {
      const ChoiceRule rule(m, p);
      CHECK(find_block(cumulative_offer(rule).matching, rule, search).stable());
    }
  }
}

TEST_CASE("ordered subsets") {
  const std::vector<Position> three{{0, Category::GC}, {0, Category::SC}, {1, Category::GC}};
  CHECK(ordered_subsets(three).size() == 16);  // 1 + 3 + 6 + 6
  CHECK(ordered_subsets(std::span<const Position>{}).size() == 1);
}

TEST_CASE("strategy-proofness") {
  SUBCASE("an individual at the top pair cannot gain") {
    const ChoiceRule rule(independence_market(), ChoicePolicy::NoTransfer);
    CHECK_FALSE(find_profitable_deviation(rule, 0));  // i gets (s,SC)
    CHECK_FALSE(find_profitable_deviation(rule, 1));
  }
  SUBCASE("no deviation on random markets") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const Market m = generate_market(small_markets(), seed);
      const ChoiceRule rule(m, ChoicePolicy::TransferToGC);
      for (IndividualIndex i = 0; i < m.individuals.size(); ++i)
        CHECK_FALSE(find_profitable_deviation(rule, i));
    }
  }
  SUBCASE("excluding declared members from open seats rewards hiding the category") {
    ChoiceFaults f;
    f.open_excludes_declared = true;
    // i (SC) prefers the open seat and outscores the GC-only k; j holds the SC seat.
    Market m = independence_market();
    m.individuals[0].preferences = {{0, Category::GC}, {0, Category::SC}};
    m.individuals[1].preferences = {{0, Category::SC}};
    m.institutions[0].scores = {80, 90};
    Individual g;
    g.id = "k";
    g.preferences = {{0, Category::GC}};
    m.individuals.push_back(g);
    m.institutions[0].scores.push_back(70);
    REQUIRE(validate_market(m).ok());
    const ChoiceRule honest(m, ChoicePolicy::NoTransfer);
    CHECK_FALSE(find_profitable_deviation(honest, 0));
    const ChoiceRule broken(m, ChoicePolicy::NoTransfer, f);
    const auto d = find_profitable_deviation(broken, 0);
    REQUIRE(d);
    CHECK_FALSE(d->declares);
    CHECK(d->misreport_outcome == Position{0, Category::GC});
  }
  SUBCASE("too many acceptable pairs") {
    GeneratorParams p;
    p.individuals = 2;
    p.institutions = 5;
    p.max_preferences = 6;
    p.p_empty_preferences = 0;
    p.p_sc = 1.0;
    p.p_declare = 1.0;
    bool thrown = false;
    for (std::uint64_t seed = 1; seed < 50 && !thrown; ++seed) {
      const Market m = generate_market(p, seed);
      const ChoiceRule rule(m, ChoicePolicy::NoTransfer);
      if (m.individuals[0].preferences.size() <= kMisreportPairLimit) continue;
      const auto truthful = assignment_of(cumulative_offer(rule).matching, 0);
      if (truthful && m.individuals[0].rank_of(*truthful) == std::optional<std::size_t>(0)) continue;
      CHECK_THROWS_AS(find_profitable_deviation(rule, 0), std::length_error);
      thrown = true;
    }
    CHECK(thrown);
  }
}

TEST_CASE("improvements") {
  const Market m = independence_market();
  const ChoiceRule rule(m, ChoicePolicy::NoTransfer);
  CHECK(respects_improvement(rule, {0, {95}}));  // i already has the top pair
  CHECK(respects_improvement(rule, {1, {85}}));
  CHECK_THROWS_AS(apply_improvement(m, {0, {90}}), std::invalid_argument);   // no strict increase
  CHECK_THROWS_AS(apply_improvement(m, {0, {85}}), std::invalid_argument);   // decrease
  CHECK_THROWS_AS(apply_improvement(m, {1, {90}}), std::invalid_argument);   // tie with i
  CHECK_THROWS_AS(apply_improvement(m, {1, {95, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(apply_improvement(m, {7, {95}}), std::invalid_argument);
  const Market better = apply_improvement(m, {1, {95}});
  CHECK(better.institutions[0].scores == std::vector<double>{90, 95});
  // j overtakes i and now wins the SC seat.
  CHECK(assignment_of(cumulative_offer(ChoiceRule(better, ChoicePolicy::NoTransfer)).matching, 1) ==
        Position{0, Category::SC});
}

TEST_CASE("fairness and stability are independent") {
  const auto r = independence_counterexample();
  CHECK(r.fair_is_fair);
  CHECK(r.fair_is_blocked);
  REQUIRE(r.fair_blocking_set);
  CHECK(*r.fair_blocking_set == std::vector<Contract>{j_sc});
  CHECK(r.block_choice == sorted({i_gc, j_sc}));
  CHECK(r.stable_is_stable);
  CHECK_FALSE(r.stable_is_fair);
  CHECK(r.holds());
  CHECK(r.summary().find("fair=true stable=false") != std::string::npos);

  const auto gc = independence_counterexample(ChoicePolicy::TransferToGC);
  CHECK(gc.holds());
  CHECK(gc.block_choice == r.block_choice);
  CHECK(gc.fair_blocking_set == r.fair_blocking_set);

  const auto swapped = independence_counterexample(ChoicePolicy::NoTransfer, true);
  CHECK(swapped.holds());
  CHECK(swapped.higher == 1);
  CHECK(swapped.stable_matching == sorted({{1, 0, Category::GC}, {0, 0, Category::SC}}));
  CHECK(*swapped.fair_blocking_set == std::vector<Contract>{{0, 0, Category::SC}});
}

TEST_CASE("a reduced audit passes and reports as JSON") {
  AuditConfig config;
  config.markets = 30;
  config.order_markets = 10;
  config.property_probes = 300;
  config.property_exhaustive_individuals = 3;
  config.oracle_max_individuals = 4;
  const AuditReport report = run_audit(config);
  CHECK(report.passed());
  for (const auto& c : report.checks) {
    INFO(c.name);
    CHECK(c.passed());
  }
  const auto doc = nlohmann::json::parse(report.to_json());
  CHECK(doc["passed"] == true);
  CHECK(doc["config"]["seed"] == config.seed);
  CHECK(doc["checks"].size() == report.checks.size());
}

TEST_CASE("a faulty rule fails the audit with a witness") {
  AuditConfig config;
  config.markets = 100;
  config.faults.obc_before_open = true;
  const auto check = check_choice_fairness(config);
  CHECK_FALSE(check.passed());
  REQUIRE_FALSE(check.counterexamples.empty());
  CHECK_FALSE(check.counterexamples.front().market.empty());
  const auto doc = nlohmann::json::parse(check.counterexamples.front().market);
  CHECK(doc.contains("institutions"));
}
