#include "resmatch/choice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace resmatch {

std::string_view to_string(ChoicePolicy p) {
  switch (p) {
    case ChoicePolicy::NoTransfer: return "no-transfer";
    case ChoicePolicy::TransferToGC: return "transfer-gc";
    case ChoicePolicy::TransferMerit: return "transfer-merit";
  }
  return "?";
}

std::optional<ChoicePolicy> parse_policy(std::string_view text) {
  for (ChoicePolicy p : kAllPolicies)
    if (to_string(p) == text) return p;
  return std::nullopt;
}

std::string to_string(const ChoiceFaults& faults) {
  std::string out;
  auto add = [&](std::string_view s) {
    if (!out.empty()) out += ',';
    out += s;
  };
  if (faults.keep_open_selections) add("skip-removal");
  if (faults.obc_before_open) add("obc-first");
  if (faults.ignored_reservation)
    add("ignore-reserve:" + std::to_string(*faults.ignored_reservation));
  if (faults.open_excludes_declared) add("exclude-declared");
  return out.empty() ? "none" : out;
}

const ChoiceStage* ChoiceOutcome::stage(std::string_view label) const {
  for (const auto& s : stages)
    if (s.label == label) return &s;
  return nullptr;
}

int ChoiceOutcome::transferred() const {
  for (const auto& s : stages)
    if (s.label.starts_with("OBC->")) return s.capacity;
  return 0;
}

namespace {

std::vector<int> effective_reservations(const Institution& inst, Category c,
                                        const ChoiceFaults& faults) {
  std::vector<int> row = inst.horizontal_reservations[index_of(c)];
  if (faults.ignored_reservation && *faults.ignored_reservation < row.size())
    row[*faults.ignored_reservation] = 0;
  return row;
}

}  // namespace

ChoiceOutcome overall_choice(std::span<const Contract> offered, InstitutionIndex institution,
                             const Market& market, const HorizontalHierarchy& hierarchy,
                             ChoicePolicy policy, const ChoiceFaults& faults) {
  const Institution& inst = market.institutions.at(institution);
  {
    std::vector<std::pair<IndividualIndex, Category>> keys;
    for (const auto& x : offered) {
      if (x.institution != institution)
        throw std::invalid_argument("an offer targets another institution");
      keys.emplace_back(x.individual, x.category);
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
      throw std::invalid_argument("an individual offers the same category twice");
  }

  ChoiceOutcome out;
  std::vector<bool> removed(market.individuals.size(), false);
  auto is_chosen = [&](const Contract& x) {
    return std::find(out.chosen.begin(), out.chosen.end(), x) != out.chosen.end();
  };

  auto run_stage = [&](Category c, bool remove_selected) {
    SubChoiceInput input;
    for (const auto& x : offered) {
      if (x.category != c || removed[x.individual] || is_chosen(x)) continue;
      if (faults.open_excludes_declared && c == Category::GC &&
          market.individuals[x.individual].declared)
        continue;
      input.contracts.push_back(x);
    }
    input.capacity = std::max(0, inst.category_capacity(c));
    input.reservations = effective_reservations(inst, c, faults);
    input.scores = inst.scores;
    input.hierarchy = &hierarchy;

    ChoiceStage stage{std::string(to_string(c)), input.capacity, input.contracts, c_hier(input)};
    for (const auto& x : stage.chosen) {
      out.chosen.push_back(x);
      if (remove_selected) removed[x.individual] = true;
    }
    out.stages.push_back(std::move(stage));
  };

  if (faults.obc_before_open) {
    run_stage(Category::OBC, true);
    run_stage(Category::GC, !faults.keep_open_selections);
    run_stage(Category::SC, true);
    run_stage(Category::ST, true);
  } else {
    run_stage(Category::GC, !faults.keep_open_selections);
    for (Category c : kReservedCategories) run_stage(c, true);
  }

  if (policy != ChoicePolicy::NoTransfer) {
    const ChoiceStage* obc = out.stage("OBC");
    ChoiceStage stage;
    stage.capacity = std::max(0, obc->vacancies());
    if (policy == ChoicePolicy::TransferToGC) {
      stage.label = "OBC->GC";
      for (const auto& x : offered)
        if (x.category == Category::GC && !removed[x.individual] && !is_chosen(x))
          stage.considered.push_back(x);
    } else {
      stage.label = "OBC->Merit";
      // One offer per individual; the GC-term one wins when they still have both.
      for (const auto& x : offered) {
        if (removed[x.individual] || is_chosen(x)) continue;
        auto same = std::find_if(stage.considered.begin(), stage.considered.end(),
                                 [&](const Contract& y) { return y.individual == x.individual; });
        if (same == stage.considered.end()) {
          stage.considered.push_back(x);
        } else if (x.category == Category::GC) {
          *same = x;
        }
      }
    }
    std::vector<Contract> ranked = stage.considered;
    std::sort(ranked.begin(), ranked.end(), [&](const Contract& a, const Contract& b) {
      return inst.scores[a.individual] > inst.scores[b.individual];
    });
    ranked.resize(std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(stage.capacity)));
    std::sort(ranked.begin(), ranked.end());
    stage.chosen = ranked;
    out.chosen.insert(out.chosen.end(), ranked.begin(), ranked.end());
    out.stages.push_back(std::move(stage));
  }

  std::sort(out.chosen.begin(), out.chosen.end());
  return out;
}

// ---------------------------------------------------------------------------

ChoiceRule::ChoiceRule(Market market, ChoicePolicy policy, ChoiceFaults faults)
    : market_(std::make_shared<const Market>(std::move(market))),
      hierarchy_(std::make_shared<const HorizontalHierarchy>(*market_)),
      policy_(policy),
      faults_(faults) {}

ChoiceOutcome ChoiceRule::choose(InstitutionIndex institution,
                                 std::span<const Contract> offered) const {
  return overall_choice(offered, institution, *market_, *hierarchy_, policy_, faults_);
}

std::vector<Contract> ChoiceRule::chosen(InstitutionIndex institution,
                                         std::span<const Contract> offered) const {
  return choose(institution, offered).chosen;
}

std::vector<Contract> ChoiceRule::sub_choice(SubChoiceInput input) const {
  if (faults_.ignored_reservation && *faults_.ignored_reservation < input.reservations.size())
    input.reservations[*faults_.ignored_reservation] = 0;
  return c_hier(input);
}

// ---------------------------------------------------------------------------

std::vector<UnfairRejection> unfair_rejections(std::span<const Contract> offered,
                                               std::span<const Contract> chosen,
                                               InstitutionIndex institution, const Market& market,
                                               const HorizontalHierarchy& hierarchy) {
  const auto& scores = market.institutions.at(institution).scores;
  std::vector<UnfairRejection> out;
  auto has_chosen = [&](IndividualIndex i) {
    return std::any_of(chosen.begin(), chosen.end(),
                       [&](const Contract& y) { return y.individual == i; });
  };
  for (const auto& x : offered) {
    if (has_chosen(x.individual)) continue;
    for (const auto& y : chosen) {
      const bool outscored = scores[y.individual] > scores[x.individual];
      const bool other_category = x.category != y.category;
      const bool extra_type = !hierarchy.covers(x.individual, y.individual);
      if (!outscored && !other_category && !extra_type) out.push_back({x, y});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<ChoiceStage> stage_capacities(const Institution& institution, ChoicePolicy policy,
                                          const DemandProfile& demand,
                                          const ChoiceFaults& faults) {
  Market market;
  Institution inst = institution;
  inst.scores.clear();
  for (auto& row : inst.horizontal_reservations) row.clear();
  std::vector<Contract> offered;
  for (Category c : kAllCategories) {
    for (int k = 0; k < demand[index_of(c)]; ++k) {
      const IndividualIndex i = market.individuals.size();
      Individual ind;
      ind.id = std::string(to_string(c)) + std::to_string(k);
      if (is_reserved(c)) ind.membership = ind.declared = c;
      market.individuals.push_back(ind);
      offered.push_back({i, 0, Category::GC});
      if (is_reserved(c)) offered.push_back({i, 0, c});
    }
  }
  const double n = static_cast<double>(market.individuals.size());
  for (IndividualIndex i = 0; i < market.individuals.size(); ++i)
    inst.scores.push_back(n - static_cast<double>(i));
  market.institutions.push_back(std::move(inst));
  const HorizontalHierarchy hierarchy(market);
  return overall_choice(offered, 0, market, hierarchy, policy, faults).stages;
}

std::vector<DemandProfile> demand_grid(const DemandProfile& bound) {
  std::vector<DemandProfile> out;
  DemandProfile d{};
  while (true) {
    out.push_back(d);
    std::size_t k = 0;
    while (k < d.size() && d[k] == bound[k]) d[k++] = 0;
    if (k == d.size()) break;
    ++d[k];
  }
  return out;
}

TransferReport check_monotone_transfer(ChoicePolicy policy, const Institution& institution,
                                       std::span<const DemandProfile> profiles,
                                       const ChoiceFaults& faults) {
  TransferReport report;
  report.profiles = profiles.size();
  std::vector<std::vector<ChoiceStage>> runs;
  runs.reserve(profiles.size());
  for (const auto& d : profiles) runs.push_back(stage_capacities(institution, policy, d, faults));

  auto show = [](const DemandProfile& d) {
    std::ostringstream os;
    os << '(' << d[0] << ',' << d[1] << ',' << d[2] << ',' << d[3] << ')';
    return os.str();
  };

  for (std::size_t a = 0; a < profiles.size(); ++a) {
    for (std::size_t b = 0; b < profiles.size(); ++b) {
      if (a == b) continue;
      const auto& lo = runs[a];
      const auto& hi = runs[b];
      ++report.comparisons;
      const bool more_demand = std::equal(profiles[a].begin(), profiles[a].end(),
                                          profiles[b].begin(), std::less_equal<>());
      int reach_lo = 0;
      int reach_hi = 0;
      bool more_vacancies = true;  // vacancies of b >= a in every stage so far
      for (std::size_t j = 0; j < lo.size(); ++j) {
        if (more_vacancies && hi[j].capacity < lo[j].capacity)
          report.violations.push_back(
              {profiles[a], profiles[b],
               "stage " + lo[j].label + " capacity fell from " + std::to_string(lo[j].capacity) +
                   " to " + std::to_string(hi[j].capacity) + " despite more earlier vacancies (" +
                   show(profiles[a]) + " vs " + show(profiles[b]) + ")"});
        if (more_demand && reach_hi + hi[j].capacity < reach_lo + lo[j].capacity)
          report.violations.push_back(
              {profiles[a], profiles[b],
               "seats reachable through stage " + lo[j].label + " fell with more demand (" +
                   show(profiles[a]) + " -> " + show(profiles[b]) + ")"});
        more_vacancies = more_vacancies && hi[j].vacancies() >= lo[j].vacancies();
        reach_lo += lo[j].capacity - lo[j].vacancies();
        reach_hi += hi[j].capacity - hi[j].vacancies();
      }
    }
  }
  return report;
}

}  // namespace resmatch
