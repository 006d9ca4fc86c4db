#include "resmatch/audit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace resmatch {

std::vector<EnvyViolation> unjustified_envy(std::span<const Contract> matching,
                                            const Market& market,
                                            const HorizontalHierarchy& hierarchy) {
  std::vector<EnvyViolation> out;
  for (const auto& x : matching) {
    const Individual& envier = market.individuals.at(x.individual);
    for (const auto& y : matching) {
      if (y.individual == x.individual) continue;
      if (!envier.prefers(y.position(), x.position())) continue;
      const auto& scores = market.institutions.at(y.institution).scores;
      const bool outscored = scores[y.individual] > scores[x.individual];
      const bool extra_type = !hierarchy.covers(x.individual, y.individual);
      if (!outscored && !extra_type) out.push_back({x, y});
    }
  }
  return out;
}

std::vector<EnvyViolation> unjustified_envy(std::span<const Contract> matching,
                                            const Market& market) {
  return unjustified_envy(matching, market, HorizontalHierarchy(market));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Contract> at_institution(std::span<const Contract> cs, InstitutionIndex s) {
  std::vector<Contract> out;
  for (const auto& c : cs)
    if (c.institution == s) out.push_back(c);
  return out;
}

bool blocks(std::span<const Contract> matching, std::span<const Contract> z,
            const ChoiceRule& rule) {
  std::vector<InstitutionIndex> touched;
  for (const auto& c : z) touched.push_back(c.institution);
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (InstitutionIndex s : touched) {
    std::vector<Contract> offers = at_institution(matching, s);
    std::vector<Contract> mine = at_institution(z, s);
    offers.insert(offers.end(), mine.begin(), mine.end());
    std::sort(offers.begin(), offers.end());
    const auto chosen = rule.chosen(s, offers);
    for (const auto& c : mine)
      if (!std::binary_search(chosen.begin(), chosen.end(), c)) return false;
  }
  return true;
}

}  // namespace

BlockReport find_block(std::span<const Contract> matching, const ChoiceRule& rule,
                       const BlockSearch& search) {
  const Market& market = rule.market();
  BlockReport report;

  for (InstitutionIndex s = 0; s < market.institutions.size(); ++s) {
    auto own = at_institution(matching, s);
    std::sort(own.begin(), own.end());
    if (rule.chosen(s, own) != own) report.rejecting_institutions.push_back(s);
  }
  for (const auto& c : matching)
    if (!market.individuals.at(c.individual).rank_of(c.position()))
      report.unacceptable.push_back(c.individual);

  // Candidate contracts grouped by individual.
  std::vector<std::vector<Contract>> options;
  for (IndividualIndex i = 0; i < market.individuals.size(); ++i) {
    const Individual& ind = market.individuals[i];
    const auto current = assignment_of(matching, i);
    std::vector<Contract> mine;
    for (const auto& z : contracts_of(market, i))
      if (ind.prefers(z.position(), current)) mine.push_back(z);
    report.candidates += mine.size();
    if (!mine.empty()) options.push_back(std::move(mine));
  }

  report.exhaustive = search.escalate && report.candidates <= search.exhaustive_limit;
  report.searched_size = report.exhaustive ? options.size()
                                           : std::min(search.max_block_size, options.size());

  std::vector<Contract> z;
  std::function<bool(std::size_t, std::size_t)> dfs = [&](std::size_t from, std::size_t left) {
    if (left == 0) return blocks(matching, z, rule);
    for (std::size_t k = from; k + left <= options.size(); ++k) {
      for (const auto& c : options[k]) {
        z.push_back(c);
        if (dfs(k + 1, left - 1)) return true;
        z.pop_back();
      }
    }
    return false;
  };
  for (std::size_t size = 1; size <= report.searched_size; ++size) {
    z.clear();
    if (dfs(0, size)) {
      std::sort(z.begin(), z.end());
      report.blocking_set = z;
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<Position>> ordered_subsets(std::span<const Position> pairs) {
  std::vector<std::vector<Position>> out;
  std::vector<Position> current;
  std::vector<bool> used(pairs.size(), false);
  std::function<void()> extend = [&] {
    out.push_back(current);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      current.push_back(pairs[k]);
      extend();
      current.pop_back();
      used[k] = false;
    }
  };
  extend();
  return out;
}

std::optional<Deviation> find_profitable_deviation(const ChoiceRule& rule, IndividualIndex who) {
  const Market& market = rule.market();
  const Individual& truth = market.individuals.at(who);

  std::vector<Position> eligible;
  for (InstitutionIndex s = 0; s < market.institutions.size(); ++s) {
    eligible.push_back({s, Category::GC});
    if (truth.membership) eligible.push_back({s, *truth.membership});
  }
  std::vector<Position> domain = eligible;
  if (domain.size() > kMisreportPairLimit) {
    domain = truth.preferences;
    if (domain.size() > kMisreportPairLimit)
      throw std::length_error("too many acceptable pairs to enumerate misreports");
  }

  const auto truthful = assignment_of(cumulative_offer(rule).matching, who);
  if (truthful && truth.rank_of(*truthful) == std::optional<std::size_t>(0)) return std::nullopt;

  for (auto& report : ordered_subsets(domain)) {
    if (report == truth.preferences) continue;
    const bool declares = std::any_of(report.begin(), report.end(),
                                      [](const Position& p) { return is_reserved(p.category); });
    Market altered = market;
    Individual& liar = altered.individuals[who];
    liar.declared = declares ? truth.membership : std::nullopt;
    liar.preferences = report;
    const auto outcome = assignment_of(cumulative_offer(rule.rebind(std::move(altered))).matching, who);
    if (truth.prefers(outcome, truthful))
      return Deviation{who, std::move(report), declares, truthful, outcome};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Market apply_improvement(const Market& market, const ImprovementSpec& improvement) {
  const IndividualIndex i = improvement.individual;
  if (i >= market.individuals.size()) throw std::invalid_argument("unknown individual");
  if (improvement.scores.size() != market.institutions.size())
    throw std::invalid_argument("improvement needs one score per institution");
  Market out = market;
  bool strict = false;
  for (InstitutionIndex s = 0; s < market.institutions.size(); ++s) {
    const double before = market.institutions[s].scores.at(i);
    const double after = improvement.scores[s];
    if (after < before) throw std::invalid_argument("improvement lowers a score");
    strict = strict || after > before;
    auto& scores = out.institutions[s].scores;
    for (IndividualIndex j = 0; j < scores.size(); ++j)
      if (j != i && scores[j] == after)
        throw std::invalid_argument("improvement ties " + market.individuals[i].id + " with " +
                                    market.individuals[j].id);
    scores[i] = after;
  }
  if (!strict) throw std::invalid_argument("improvement raises no score");
  return out;
}

bool respects_improvement(const ChoiceRule& rule, const ImprovementSpec& improvement) {
  const IndividualIndex i = improvement.individual;
  Market improved = apply_improvement(rule.market(), improvement);
  const auto before = assignment_of(cumulative_offer(rule).matching, i);
  const auto after = assignment_of(cumulative_offer(rule.rebind(std::move(improved))).matching, i);
  return !rule.market().individuals[i].prefers(before, after);
}

// ---------------------------------------------------------------------------

Market independence_market(bool swap_scores) {
  Market m;
  Institution s;
  s.id = "s";
  s.capacity = 2;
  s.vertical_reservations[index_of(Category::SC)] = 1;
  s.scores = swap_scores ? std::vector<double>{80, 90} : std::vector<double>{90, 80};
  for (auto& row : s.horizontal_reservations) row.clear();
  m.institutions.push_back(s);
  for (const char* id : {"i", "j"}) {
    Individual ind;
    ind.id = id;
    ind.membership = ind.declared = Category::SC;
    ind.preferences = {{0, Category::SC}, {0, Category::GC}};
    m.individuals.push_back(ind);
  }
  return m;
}

IndependenceReport independence_counterexample(ChoicePolicy policy, bool swap_scores) {
  IndependenceReport r;
  r.market = independence_market(swap_scores);
  r.policy = policy;
  r.higher = swap_scores ? 1 : 0;
  r.lower = swap_scores ? 0 : 1;
  const ChoiceRule rule(r.market, policy);

  const Contract high_gc{r.higher, 0, Category::GC};
  const Contract low_gc{r.lower, 0, Category::GC};
  const Contract low_sc{r.lower, 0, Category::SC};
  auto sorted = [](std::vector<Contract> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  r.fair_matching = sorted({high_gc, low_gc});
  r.stable_matching = sorted({high_gc, low_sc});
  r.block_offers = sorted({high_gc, low_gc, low_sc});
  r.block_choice = rule.chosen(0, r.block_offers);

  BlockSearch exhaustive;
  exhaustive.escalate = true;
  r.fair_is_fair = unjustified_envy(r.fair_matching, r.market).empty();
  const auto fair_report = find_block(r.fair_matching, rule, exhaustive);
  r.fair_blocking_set = fair_report.blocking_set;
  r.fair_is_blocked = fair_report.blocking_set.has_value();
  r.stable_is_stable = find_block(r.stable_matching, rule, exhaustive).stable();
  r.stable_is_fair = unjustified_envy(r.stable_matching, r.market).empty();
  return r;
}

std::string IndependenceReport::summary() const {
  auto list = [&](std::span<const Contract> cs) {
    std::string s = "{";
    for (std::size_t k = 0; k < cs.size(); ++k) s += (k ? "," : "") + describe(market, cs[k]);
    return s + "}";
  };
  std::ostringstream os;
  os << "policy " << to_string(policy) << ", higher score: " << market.individuals[higher].id
     << "\n";
  os << "fair matching " << list(fair_matching) << ": fair=" << std::boolalpha << fair_is_fair
     << " stable=" << !fair_is_blocked;
  if (fair_blocking_set) os << " (blocked via " << list(*fair_blocking_set) << ")";
  os << "\nchoice from " << list(block_offers) << " = " << list(block_choice) << "\n";
  os << "stable matching " << list(stable_matching) << ": stable=" << stable_is_stable
     << " fair=" << stable_is_fair << "\n";
  os << (holds() ? "fairness and stability are independent" : "COUNTEREXAMPLE BROKEN") << "\n";
  return os.str();
}

}  // namespace resmatch
