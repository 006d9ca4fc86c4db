#include "resmatch/audit_suite.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "resmatch/audit.hpp"
#include "resmatch/cop.hpp"
#include "resmatch/instance_io.hpp"
#include "resmatch/subchoice.hpp"

namespace resmatch {

GeneratorParams AuditConfig::default_audit_generator() {
  GeneratorParams p;
  p.vary_sizes = true;
  p.min_individuals = 2;
  p.individuals = 6;
  p.min_institutions = 1;
  p.institutions = 3;
  p.max_preferences = 4;
  p.max_capacity = 3;
  return p;
}

namespace {

using Clock = std::chrono::steady_clock;

class Check {
 public:
  Check(const AuditConfig& config, std::string name, std::string property)
      : config_(config), start_(Clock::now()) {
    result_.name = std::move(name);
    result_.property = std::move(property);
  }

  void pass() { ++result_.cases; }
  void skip() { ++result_.skipped; }
  void fail(std::string what, const Market* market = nullptr) {
    ++result_.cases;
    ++result_.failures;
    if (result_.counterexamples.size() < config_.max_counterexamples)
      result_.counterexamples.push_back({std::move(what), market ? serialize_market(*market) : ""});
  }
  void expect(bool ok, const std::function<std::string()>& what, const Market* market = nullptr) {
    if (ok)
      pass();
    else
      fail(what(), market);
  }

  CheckResult finish() {
    result_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return std::move(result_);
  }

 private:
  const AuditConfig& config_;
  Clock::time_point start_;
  CheckResult result_;
};

std::uint64_t market_seed(const AuditConfig& config, std::size_t k) { return config.seed + k; }

std::string policy_tag(ChoicePolicy p, std::uint64_t seed) {
  return "seed " + std::to_string(seed) + ", policy " + std::string(to_string(p));
}

std::string show(const Market& market, std::span<const Contract> cs) {
  std::string s = "{";
  for (std::size_t k = 0; k < cs.size(); ++k) s += (k ? "," : "") + describe(market, cs[k]);
  return s + "}";
}

std::string show(const Market& market, std::optional<Position> p) {
  if (!p) return "unmatched";
  return "(" + market.institutions[p->institution].id + "," + std::string(to_string(p->category)) +
         ")";
}

// Runs `body` on every generated market under every configured policy.
void for_each_market(const AuditConfig& config, const GeneratorParams& params, std::size_t count,
                     const std::function<void(const ChoiceRule&, std::uint64_t)>& body) {
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t seed = market_seed(config, k);
    const Market market = generate_market(params, seed);
    for (ChoicePolicy p : config.policies) body(ChoiceRule(market, p, config.faults), seed);
  }
}

// ---------------------------------------------------------------------------
// Sub-choice inputs over a single institution and category.

struct TypeStructure {
  const char* name;
  std::size_t types;
  std::vector<std::vector<TypeIndex>> profiles;  // the type sets an individual may hold
};

const std::vector<TypeStructure>& oracle_structures() {
  static const std::vector<TypeStructure> s{
      {"none", 0, {{}}},
      {"single", 1, {{}, {0}}},
      {"nested", 2, {{}, {0}, {0, 1}}},
      {"disjoint", 2, {{}, {0}, {1}}},
  };
  return s;
}

// Women, women with disabilities inside them, and a disjoint third type.
const TypeStructure& property_structure() {
  static const TypeStructure s{"nested+disjoint", 3, {{}, {0}, {0, 1}, {2}}};
  return s;
}

// Calls `body` with every reservation vector in [0, max]^types.
void for_each_reserve(std::size_t types, int max, const std::function<void(const std::vector<int>&)>& body) {
  std::vector<int> r(types, 0);
  while (true) {
    body(r);
    std::size_t k = 0;
    while (k < types && r[k] == max) r[k++] = 0;
    if (k == types) return;
    ++r[k];
  }
}

// Calls `body` with every assignment of profiles to n individuals.
void for_each_profile(const TypeStructure& s, std::size_t n,
                      const std::function<void(const std::vector<std::vector<TypeIndex>>&)>& body) {
  std::vector<std::size_t> digit(n, 0);
  std::vector<std::vector<TypeIndex>> types(n);
  while (true) {
    for (std::size_t k = 0; k < n; ++k) types[k] = s.profiles[digit[k]];
    body(types);
    std::size_t k = 0;
    while (k < n && digit[k] + 1 == s.profiles.size()) digit[k++] = 0;
    if (k == n) return;
    ++digit[k];
  }
}

std::string describe_input(const std::vector<std::vector<TypeIndex>>& types,
                           std::span<const double> scores, int capacity,
                           std::span<const int> reserves) {
  std::ostringstream os;
  os << "individuals [";
  for (std::size_t k = 0; k < types.size(); ++k) {
    os << (k ? " " : "") << "#" << k << ":" << scores[k] << "{";
    for (std::size_t t = 0; t < types[k].size(); ++t) os << (t ? "," : "") << types[k][t];
    os << "}";
  }
  os << "] capacity " << capacity << " reserves [";
  for (std::size_t t = 0; t < reserves.size(); ++t) os << (t ? "," : "") << reserves[t];
  os << "]";
  return os.str();
}

SubChoiceInput input_for(std::uint32_t mask, int capacity, const std::vector<int>& reserves,
                         std::span<const double> scores, const HorizontalHierarchy& h) {
  SubChoiceInput in;
  for (IndividualIndex i = 0; i < scores.size(); ++i)
    if (mask >> i & 1u) in.contracts.push_back({i, 0, Category::GC});
  in.capacity = capacity;
  in.reservations = reserves;
  in.scores = scores;
  in.hierarchy = &h;
  return in;
}

std::uint32_t mask_of(std::span<const Contract> cs) {
  std::uint32_t m = 0;
  for (const auto& c : cs) m |= 1u << c.individual;
  return m;
}

std::string show_mask(std::uint32_t m) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < 32; ++i)
    if (m >> i & 1u) {
      s += (first ? "#" : ",#") + std::to_string(i);
      first = false;
    }
  return s + "}";
}

// Violations of the sub-choice properties on one pool, given the choice on
// every subset at capacities q and q + 1.
struct PropertyProbe {
  const std::vector<std::uint32_t>* at_q;
  const std::vector<std::uint32_t>* at_q1;
  std::span<const double> scores;
  const HorizontalHierarchy* hierarchy;
  int capacity;
};

std::vector<std::string> property_violations(const PropertyProbe& p, std::uint32_t y, std::size_t x,
                                          std::optional<std::size_t> z) {
  std::vector<std::string> out;
  const auto& C = *p.at_q;
  const std::uint32_t yx = y | 1u << x;
  const std::uint32_t cy = C[y];
  const std::uint32_t cyx = C[yx];
  const bool x_rejected = !(cyx >> x & 1u);
  const std::string where = " for Y=" + show_mask(y) + ", x=#" + std::to_string(x);

  if (x_rejected && cyx != cy) out.push_back("rejected contract changed the choice" + where);
  if (std::popcount(cy) > std::popcount(cyx)) out.push_back("choice shrank when x was added" + where);
  if (z) {
    const std::uint32_t yxz = yx | 1u << *z;
    if (x_rejected && (C[yxz] >> x & 1u))
      out.push_back("x chosen after adding #" + std::to_string(*z) + " though rejected before" + where);
  }
  const std::uint32_t wider = (*p.at_q1)[yx];
  if ((cyx & ~wider) != 0 || std::popcount(wider) - std::popcount(cyx) > 1)
    out.push_back("choice at capacity " + std::to_string(p.capacity + 1) + " is " +
                  show_mask(wider) + ", not a one-seat extension of " + show_mask(cyx) + where);
  if (std::popcount(cyx) != std::min(std::popcount(yx), p.capacity))
    out.push_back("choice is not size min(|X|, q)" + where);
  // A rejected individual may not outscore a chosen one whose types they cover.
  for (std::size_t r = 0; r < 32; ++r) {
    if (!(yx >> r & 1u) || (cyx >> r & 1u)) continue;
    for (std::size_t c = 0; c < 32; ++c) {
      if (!(cyx >> c & 1u)) continue;
      if (p.scores[r] > p.scores[c] && p.hierarchy->covers(r, c))
        out.push_back("#" + std::to_string(r) + " rejected in favour of weaker #" +
                      std::to_string(c) + where);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

CheckResult check_subchoice_oracle(const AuditConfig& config) {
  Check check(config, "subchoice-oracle",
              "c_hier equals the unique merit-undominated reservation-satisfying selection");
  const ChoiceRule rule(Market{}, ChoicePolicy::NoTransfer, config.faults);
  for (const auto& structure : oracle_structures()) {
    for (std::size_t n = 0; n <= config.oracle_max_individuals; ++n) {
      std::vector<double> scores(n);
      for (std::size_t k = 0; k < n; ++k) scores[k] = 100.0 - 10.0 * static_cast<double>(k);
      for_each_profile(structure, n, [&](const std::vector<std::vector<TypeIndex>>& types) {
        const HorizontalHierarchy h(structure.types, types);
        for_each_reserve(structure.types, config.oracle_max_reserve, [&](const std::vector<int>& res) {
          for (int cap = 0; cap <= config.oracle_max_capacity; ++cap) {
            if (!reservations_applicable(h, res, cap, true)) {
              check.skip();
              continue;
            }
            const SubChoiceInput in = input_for((1u << n) - 1, cap, res, scores, h);
            const auto tag = [&] {
              return std::string(structure.name) + ": " + describe_input(types, scores, cap, res);
            };
            std::vector<Contract> expected;
            try {
              expected = oracle_undominated(in);
            } catch (const std::logic_error& e) {
              check.fail(tag() + ": " + e.what());
              continue;
            }
            const auto got = rule.sub_choice(in);
            check.expect(got == expected, [&] {
              return tag() + ": chose " + show_mask(mask_of(got)) + ", oracle " +
                     show_mask(mask_of(expected));
            });
          }
        });
      });
    }
  }
  return check.finish();
}

CheckResult check_subchoice_properties(const AuditConfig& config) {
  Check check(config, "subchoice-properties",
              "substitutability, size and quota monotonicity, irrelevance of rejected "
              "contracts, q-acceptance and fairness of c_hier");
  const ChoiceRule rule(Market{}, ChoicePolicy::NoTransfer, config.faults);
  const TypeStructure& structure = property_structure();

  auto choices = [&](std::size_t n, int cap, const std::vector<int>& res,
                     std::span<const double> scores, const HorizontalHierarchy& h) {
    std::vector<std::uint32_t> out(std::size_t{1} << n);
    for (std::uint32_t m = 0; m < out.size(); ++m)
      out[m] = mask_of(rule.sub_choice(input_for(m, cap, res, scores, h)));
    return out;
  };

  // Every pool of up to property_exhaustive_individuals, every subset, every x and z.
  for (std::size_t n = 1; n <= config.property_exhaustive_individuals; ++n) {
    std::vector<double> scores(n);
    for (std::size_t k = 0; k < n; ++k) scores[k] = 100.0 - 10.0 * static_cast<double>(k);
    for_each_profile(structure, n, [&](const std::vector<std::vector<TypeIndex>>& types) {
      const HorizontalHierarchy h(structure.types, types);
      for_each_reserve(structure.types, 1, [&](const std::vector<int>& res) {
        std::vector<std::uint32_t> next = choices(n, 0, res, scores, h);
        for (int cap = 0; cap <= 3; ++cap) {
          std::vector<std::uint32_t> here = std::move(next);
          next = choices(n, cap + 1, res, scores, h);
          if (!reservations_applicable(h, res, cap, true)) {
            check.skip();
            continue;
          }
          const PropertyProbe probe{&here, &next, scores, &h, cap};
          std::vector<std::string> found;
          for (std::uint32_t y = 0; y < here.size() && found.empty(); ++y)
            for (std::size_t x = 0; x < n && found.empty(); ++x) {
              if (y >> x & 1u) continue;
              found = property_violations(probe, y, x, std::nullopt);
              for (std::size_t z = 0; z < n && found.empty(); ++z)
                if (z != x && !(y >> z & 1u)) found = property_violations(probe, y, x, z);
            }
          check.expect(found.empty(), [&] {
            return describe_input(types, scores, cap, res) + ": " + found.front();
          });
        }
      });
    });
  }

  // Random probes on larger pools with random scores.
  Rng rng(config.seed ^ 0x5eedf00dULL);
  std::size_t probes = 0;
  for (std::size_t attempt = 0; probes < config.property_probes && attempt < 50 * config.property_probes;
       ++attempt) {
    const std::size_t n = rng.uniform(1, std::max<std::size_t>(1, config.property_max_individuals));
    std::vector<std::vector<TypeIndex>> types(n);
    std::vector<double> scores(n);
    for (std::size_t k = 0; k < n; ++k) {
      types[k] = structure.profiles[rng.uniform(0, structure.profiles.size() - 1)];
      scores[k] = static_cast<double>(rng.uniform(1, 1000)) + static_cast<double>(k) / 1000.0;
    }
    const HorizontalHierarchy h(structure.types, types);
    std::vector<int> res(structure.types);
    for (auto& r : res) r = static_cast<int>(rng.uniform(0, 3));
    const int cap = static_cast<int>(rng.uniform(0, 4));
    if (!reservations_applicable(h, res, cap, true)) {
      check.skip();
      continue;
    }
    ++probes;
    std::uint32_t y = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (rng.chance(0.5)) y |= 1u << k;
    std::vector<std::size_t> outside;
    for (std::size_t k = 0; k < n; ++k)
      if (!(y >> k & 1u)) outside.push_back(k);
    if (outside.empty()) {
      y &= ~(1u << rng.uniform(0, n - 1));
      outside.clear();
      for (std::size_t k = 0; k < n; ++k)
        if (!(y >> k & 1u)) outside.push_back(k);
    }
    rng.shuffle(outside);
    const std::size_t x = outside[0];
    const std::optional<std::size_t> z =
        outside.size() > 1 ? std::optional<std::size_t>(outside[1]) : std::nullopt;
    // Only the subsets the probe looks at.
    std::vector<std::uint32_t> here(std::size_t{1} << n, 0), wider(std::size_t{1} << n, 0);
    for (std::uint32_t m : {y, y | 1u << x, z ? (y | 1u << x | 1u << *z) : y}) {
      here[m] = mask_of(rule.sub_choice(input_for(m, cap, res, scores, h)));
      wider[m] = mask_of(rule.sub_choice(input_for(m, cap + 1, res, scores, h)));
    }
    const PropertyProbe probe{&here, &wider, scores, &h, cap};
    const auto found = property_violations(probe, y, x, z);
    check.expect(found.empty(), [&] {
      return "random probe: " + describe_input(types, scores, cap, res) + ": " + found.front();
    });
  }
  return check.finish();
}

CheckResult check_choice_fairness(const AuditConfig& config) {
  Check check(config, "choice-fairness",
              "every choice is feasible, fair, and fills open seats by open competition");
  for_each_market(config, config.generator, config.markets, [&](const ChoiceRule& rule,
                                                                std::uint64_t seed) {
    const Market& market = rule.market();
    auto audit_choice = [&](InstitutionIndex s, std::span<const Contract> offered,
                            const std::string& where) -> std::optional<std::string> {
      const ChoiceOutcome outcome = rule.choose(s, offered);
      const auto& chosen = outcome.chosen;
      for (const auto& c : chosen)
        if (std::find(offered.begin(), offered.end(), c) == offered.end())
          return where + ": chose unoffered " + describe(market, c);
      std::vector<IndividualIndex> who;
      for (const auto& c : chosen) who.push_back(c.individual);
      std::sort(who.begin(), who.end());
      if (std::adjacent_find(who.begin(), who.end()) != who.end())
        return where + ": chose two contracts of one individual in " + show(market, chosen);
      if (static_cast<int>(chosen.size()) > market.institutions[s].capacity)
        return where + ": chose " + std::to_string(chosen.size()) + " contracts over capacity";
      const auto unfair = unfair_rejections(offered, chosen, s, market, rule.hierarchy());
      if (!unfair.empty())
        return where + ": " + describe(market, unfair.front().rejected) + " rejected while " +
               describe(market, unfair.front().chosen) + " chosen";
      // Open seats are filled before any reserved seat, from every GC-term offer.
      const Institution& inst = market.institutions[s];
      SubChoiceInput open;
      for (const auto& c : offered)
        if (c.category == Category::GC) open.contracts.push_back(c);
      open.capacity = inst.open_capacity();
      open.reservations = inst.horizontal_reservations[index_of(Category::GC)];
      open.scores = inst.scores;
      open.hierarchy = &rule.hierarchy();
      const auto expected = c_hier(open);
      const ChoiceStage* stage = outcome.stage("GC");
      if (!stage || stage->chosen != expected)
        return where + ": open seats went to " + (stage ? show(market, stage->chosen) : "nobody") +
               " instead of " + show(market, expected);
      return std::nullopt;
    };

    std::optional<std::string> problem;
    const CopResult result = cumulative_offer(rule);
    for (const auto& step : result.trace.steps) {
      problem = audit_choice(step.proposed.institution, step.available,
                             "step " + std::to_string(step.index));
      if (problem) break;
    }
    const auto universe = build_contract_universe(market);
    for (InstitutionIndex s = 0; !problem && s < market.institutions.size(); ++s) {
      std::vector<Contract> offers;
      for (const auto& c : universe)
        if (c.institution == s) offers.push_back(c);
      problem = audit_choice(s, offers, "all offers to " + market.institutions[s].id);
    }
    check.expect(!problem, [&] { return policy_tag(rule.policy(), seed) + ": " + *problem; },
                 &market);
  });
  return check.finish();
}

CheckResult check_matching_fairness(const AuditConfig& config) {
  Check check(config, "matching-fairness",
              "the outcome is feasible and has no unjustified envy");
  for_each_market(config, config.generator, config.markets, [&](const ChoiceRule& rule,
                                                                std::uint64_t seed) {
    const Market& market = rule.market();
    const auto matching = cumulative_offer(rule).matching;
    if (!is_feasible(matching, market)) {
      check.fail(policy_tag(rule.policy(), seed) + ": infeasible " + show(market, matching), &market);
      return;
    }
    const auto envy = unjustified_envy(matching, market, rule.hierarchy());
    check.expect(envy.empty(), [&] {
      return policy_tag(rule.policy(), seed) + ": " + describe(market, envy.front().envious) +
             " envies " + describe(market, envy.front().envied);
    }, &market);
  });
  return check.finish();
}

CheckResult check_stability(const AuditConfig& config) {
  Check check(config, "stability", "the outcome is individually rational and unblocked");
  BlockSearch search;
  search.escalate = config.exhaustive_blocks;
  for_each_market(config, config.generator, config.markets, [&](const ChoiceRule& rule,
                                                                std::uint64_t seed) {
    const Market& market = rule.market();
    const auto matching = cumulative_offer(rule).matching;
    const BlockReport report = find_block(matching, rule, search);
    check.expect(report.stable(), [&] {
      std::string why = policy_tag(rule.policy(), seed) + ": " + show(market, matching);
      if (!report.rejecting_institutions.empty())
        why += " rejected by " + market.institutions[report.rejecting_institutions.front()].id;
      if (!report.unacceptable.empty())
        why += " unacceptable to " + market.individuals[report.unacceptable.front()].id;
      if (report.blocking_set) why += " blocked by " + show(market, *report.blocking_set);
      return why;
    }, &market);
  });
  return check.finish();
}

CheckResult check_strategy_proofness(const AuditConfig& config) {
  Check check(config, "strategy-proofness",
              "no report over eligible pairs, declared or not, beats truth-telling");
  for_each_market(config, config.generator, config.markets, [&](const ChoiceRule& rule,
                                                                std::uint64_t seed) {
    const Market& market = rule.market();
    for (IndividualIndex i = 0; i < market.individuals.size(); ++i) {
      std::optional<Deviation> d;
      try {
        d = find_profitable_deviation(rule, i);
      } catch (const std::length_error&) {
        check.skip();
        continue;
      }
      check.expect(!d, [&] {
        std::string report;
        for (const auto& p : d->report) report += show(market, p) + " ";
        return policy_tag(rule.policy(), seed) + ": " + market.individuals[i].id + " reports [" +
               report + "] and gets " + show(market, d->misreport_outcome) + " instead of " +
               show(market, d->truthful_outcome);
      }, &market);
    }
  });
  return check.finish();
}

CheckResult check_improvements(const AuditConfig& config) {
  Check check(config, "respect-for-improvements", "raising an individual's scores never hurts them");
  Rng rng(config.seed ^ 0x1a2b3c4dULL);
  for_each_market(config, config.generator, config.markets, [&](const ChoiceRule& rule,
                                                                std::uint64_t seed) {
    const Market& market = rule.market();
    for (std::size_t k = 0; k < config.improvements_per_market; ++k) {
      ImprovementSpec spec;
      spec.individual = rng.uniform(0, market.individuals.size() - 1);
      const std::size_t forced = rng.uniform(0, market.institutions.size() - 1);
      for (InstitutionIndex s = 0; s < market.institutions.size(); ++s) {
        double score = market.institutions[s].scores[spec.individual];
        // Half-integer bumps cannot tie the generator's integer scores.
        if (s == forced || rng.chance(0.5))
          score = std::floor(score) +
                  static_cast<double>(rng.uniform(1, static_cast<std::size_t>(
                                                         config.generator.score_range))) +
                  0.5;
        spec.scores.push_back(score);
      }
      check.expect(respects_improvement(rule, spec), [&] {
        std::string why = policy_tag(rule.policy(), seed) + ": raising " +
                          market.individuals[spec.individual].id + " to [";
        for (std::size_t s = 0; s < spec.scores.size(); ++s)
          why += (s ? "," : "") + format_score(spec.scores[s]);
        return why + "] hurt them";
      }, &market);
    }
  });
  return check.finish();
}

CheckResult check_declarations(const AuditConfig& config) {
  Check check(config, "declaration-incentives",
              "withholding a reserved category or a horizontal type never helps");
  for_each_market(config, config.generator, config.markets, [&](const ChoiceRule& rule,
                                                                std::uint64_t seed) {
    const Market& market = rule.market();
    const auto truthful = cumulative_offer(rule).matching;
    auto compare = [&](IndividualIndex i, Market altered, const std::string& change) {
      if (!validate_market(altered).ok()) {
        check.skip();
        return;
      }
      const Individual& truth = market.individuals[i];
      const auto before = assignment_of(truthful, i);
      const auto after = assignment_of(cumulative_offer(rule.rebind(std::move(altered))).matching, i);
      check.expect(!truth.prefers(after, before), [&] {
        return policy_tag(rule.policy(), seed) + ": " + truth.id + " " + change + " and gets " +
               show(market, after) + " instead of " + show(market, before);
      }, &market);
    };

    for (IndividualIndex i = 0; i < market.individuals.size(); ++i) {
      const Individual& ind = market.individuals[i];
      if (ind.declared) {
        Market altered = market;
        auto& hidden = altered.individuals[i];
        hidden.declared.reset();
        std::erase_if(hidden.preferences, [](const Position& p) { return is_reserved(p.category); });
        compare(i, std::move(altered), "hides " + std::string(to_string(*ind.declared)));
      }
      for (TypeIndex t : ind.horizontal_types) {
        Market altered = market;
        auto& hidden = altered.individuals[i].horizontal_types;
        // Dropping a type drops the types nested in it as well.
        std::erase_if(hidden, [&](TypeIndex u) {
          return u == t || rule.hierarchy().contains(t, u);
        });
        compare(i, std::move(altered), "hides " + market.horizontal_types[t].id);
      }
    }
  });
  return check.finish();
}

CheckResult check_order_invariance(const AuditConfig& config) {
  Check check(config, "order-invariance", "every proposal order yields the same outcome");
  GeneratorParams params = config.generator;
  params.individuals = std::min(params.individuals, config.order_max_individuals);
  params.min_individuals = std::min(params.min_individuals, params.individuals);
  for_each_market(config, params, config.order_markets, [&](const ChoiceRule& rule,
                                                            std::uint64_t seed) {
    const Market& market = rule.market();
    const auto reference = cumulative_offer(rule).matching;
    ProposalOrder order = default_order(market);
    std::sort(order.sequence.begin(), order.sequence.end());
    std::optional<std::string> problem;
    do {
      const auto other = cumulative_offer(rule, order).matching;
      if (other != reference) {
        std::string seq;
        for (auto i : order.sequence) seq += market.individuals[i].id + " ";
        problem = "order [" + seq + "] gives " + show(market, other) + " instead of " +
                  show(market, reference);
      }
    } while (!problem && std::next_permutation(order.sequence.begin(), order.sequence.end()));
    check.expect(!problem, [&] { return policy_tag(rule.policy(), seed) + ": " + *problem; },
                 &market);
  });
  return check.finish();
}

CheckResult check_transfer_monotonicity(const AuditConfig& config) {
  Check check(config, "transfer-monotonicity",
              "stage capacities are monotone in earlier vacancies and in demand");
  struct Shape {
    int capacity, sc, st, obc;
  };
  const Shape shapes[] = {{6, 1, 1, 2}, {4, 0, 0, 2}, {3, 1, 1, 1}, {5, 1, 0, 3}, {2, 0, 0, 2}};
  const auto grid = demand_grid(config.demand_bound);
  for (ChoicePolicy policy : config.policies) {
    for (const Shape& shape : shapes) {
      Institution inst;
      inst.id = "s";
      inst.capacity = shape.capacity;
      inst.vertical_reservations = {0, shape.sc, shape.st, shape.obc};
      const TransferReport report = check_monotone_transfer(policy, inst, grid, config.faults);
      const std::string tag = "policy " + std::string(to_string(policy)) + ", capacity " +
                              std::to_string(shape.capacity) + " (SC " + std::to_string(shape.sc) +
                              ", ST " + std::to_string(shape.st) + ", OBC " +
                              std::to_string(shape.obc) + ")";
      check.expect(report.ok(), [&] { return tag + ": " + report.violations.front().detail; });
    }
  }
  return check.finish();
}

CheckResult check_independence(const AuditConfig& config) {
  Check check(config, "fairness-stability-independence",
              "a fair matching can be blocked and a stable one can be unfair");
  for (ChoicePolicy policy : config.policies)
    for (bool swap : {false, true}) {
      const IndependenceReport r = independence_counterexample(policy, swap);
      check.expect(r.holds(), [&] { return r.summary(); }, &r.market);
    }
  return check.finish();
}

// ---------------------------------------------------------------------------

AuditReport run_audit(const AuditConfig& config) {
  AuditReport report;
  report.config = config;
  for (auto* run : {check_subchoice_oracle, check_subchoice_properties, check_choice_fairness,
                    check_matching_fairness, check_stability, check_strategy_proofness,
                    check_improvements, check_declarations, check_order_invariance,
                    check_transfer_monotonicity, check_independence})
    report.checks.push_back(run(config));
  return report;
}

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

const CheckResult* AuditReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string AuditReport::to_json() const {
  using json = nlohmann::ordered_json;
  json doc;
  doc["passed"] = passed();
  json cfg;
  cfg["seed"] = config.seed;
  cfg["markets"] = config.markets;
  cfg["generator"] = config.generator.describe();
  json policies = json::array();
  for (auto p : config.policies) policies.push_back(std::string(to_string(p)));
  cfg["policies"] = policies;
  cfg["faults"] = to_string(config.faults);
  cfg["exhaustive_blocks"] = config.exhaustive_blocks;
  cfg["property_probes"] = config.property_probes;
  cfg["order_markets"] = config.order_markets;
  doc["config"] = cfg;
  doc["checks"] = json::array();
  for (const auto& c : checks) {
    json j{{"name", c.name},     {"property", c.property}, {"passed", c.passed()},
           {"cases", c.cases},   {"failures", c.failures}, {"skipped", c.skipped},
           {"seconds", c.seconds}};
    json ces = json::array();
    for (const auto& ce : c.counterexamples) {
      json e{{"what", ce.what}};
      if (!ce.market.empty()) e["market"] = json::parse(ce.market);
      ces.push_back(e);
    }
    j["counterexamples"] = ces;
    doc["checks"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

}  // namespace resmatch
