#include "resmatch/subchoice.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace resmatch {

std::string_view to_string(Domination d) {
  switch (d) {
    case Domination::FirstDominates: return "first_dominates";
    case Domination::SecondDominates: return "second_dominates";
    case Domination::Equal: return "equal";
    case Domination::Incomparable: return "incomparable";
  }
  return "?";
}

namespace {

std::vector<double> sorted_scores(std::span<const IndividualIndex> group,
                                  std::span<const double> scores) {
  std::vector<double> out;
  out.reserve(group.size());
  for (IndividualIndex i : group) out.push_back(scores[i]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Domination compare_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  bool a_ahead = false;
  bool b_ahead = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) a_ahead = true;
    if (a[k] < b[k]) b_ahead = true;
  }
  if (a_ahead && b_ahead) return Domination::Incomparable;
  if (a_ahead) return Domination::FirstDominates;
  if (b_ahead) return Domination::SecondDominates;
  return Domination::Equal;
}

const HorizontalHierarchy& hierarchy_of(const SubChoiceInput& input) {
  if (!input.hierarchy) throw std::invalid_argument("sub-choice input without a hierarchy");
  return *input.hierarchy;
}

int reservation(const SubChoiceInput& input, TypeIndex t) {
  return t < input.reservations.size() ? input.reservations[t] : 0;
}

}  // namespace

Domination merit_compare(std::span<const IndividualIndex> first,
                         std::span<const IndividualIndex> second, std::span<const double> scores) {
  if (first.size() != second.size())
    throw std::invalid_argument("merit comparison needs sets of equal size");
  return compare_sorted(sorted_scores(first, scores), sorted_scores(second, scores));
}

std::vector<Contract> c_hier(const SubChoiceInput& input, SubChoiceDiagnostics* diagnostics) {
  const auto& hierarchy = hierarchy_of(input);
  auto note = [&](std::string msg) {
    if (diagnostics) diagnostics->messages.push_back(std::move(msg));
  };

  std::vector<Contract> pool = input.contracts;
  std::sort(pool.begin(), pool.end(), [&](const Contract& a, const Contract& b) {
    return input.scores[a.individual] > input.scores[b.individual];
  });
  std::vector<bool> taken(pool.size(), false);
  int seats = input.capacity;
  if (seats < 0) {
    note("negative capacity treated as zero");
    seats = 0;
  }

  const auto& classes = hierarchy.classes();
  std::vector<int> remaining(classes.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (TypeIndex t : classes[c].members)
      remaining[c] = std::max(remaining[c], reservation(input, t));

  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (remaining[c] <= 0) continue;
    const TypeIndex rep = classes[c].members.front();
    int picked = 0;
    for (std::size_t k = 0; k < pool.size() && picked < remaining[c]; ++k) {
      if (taken[k] || !hierarchy.holds(pool[k].individual, rep)) continue;
      if (seats == 0) {
        note("seats ran out before the reservation of type " + std::to_string(rep) +
             " was met; reservations are not applicable");
        break;
      }
      taken[k] = true;
      ++picked;
      --seats;
    }
    for (std::size_t d = 0; d < classes.size(); ++d)
      if (hierarchy.class_contains(d, c)) remaining[d] = std::max(0, remaining[d] - picked);
  }

  for (std::size_t k = 0; k < pool.size() && seats > 0; ++k) {
    if (taken[k]) continue;
    taken[k] = true;
    --seats;
  }

  std::vector<Contract> chosen;
  for (std::size_t k = 0; k < pool.size(); ++k)
    if (taken[k]) chosen.push_back(pool[k]);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

bool satisfies_horizontal(std::span<const Contract> chosen, const SubChoiceInput& input) {
  const auto& hierarchy = hierarchy_of(input);
  auto is_chosen = [&](const Contract& x) {
    return std::find(chosen.begin(), chosen.end(), x) != chosen.end();
  };
  for (TypeIndex t = 0; t < hierarchy.type_count(); ++t) {
    const int needed = reservation(input, t);
    if (needed <= 0) continue;
    int have = 0;
    bool holder_left_out = false;
    for (const auto& x : input.contracts) {
      if (!hierarchy.holds(x.individual, t)) continue;
      if (is_chosen(x)) {
        ++have;
      } else {
        holder_left_out = true;
      }
    }
    if (have < needed && holder_left_out) return false;
  }
  return true;
}

std::vector<std::vector<Contract>> undominated_selections(const SubChoiceInput& input) {
  const std::size_t n = input.contracts.size();
  if (n > kOracleLimit) throw std::length_error("oracle enumeration bound exceeded");
  const std::size_t size =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(0, input.capacity)));

  struct Candidate {
    std::vector<Contract> chosen;
    std::vector<double> scores;
  };
  std::vector<Candidate> feasible;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
    Candidate cand;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1u << k)) cand.chosen.push_back(input.contracts[k]);
    if (!satisfies_horizontal(cand.chosen, input)) continue;
    std::vector<IndividualIndex> people;
    for (const auto& x : cand.chosen) people.push_back(x.individual);
    cand.scores = sorted_scores(people, input.scores);
    std::sort(cand.chosen.begin(), cand.chosen.end());
    feasible.push_back(std::move(cand));
  }
  if (feasible.empty()) return {};

  // The lexicographically best score vector is never dominated; if it
  // dominates every other candidate it is the only undominated one.
  auto best = std::max_element(feasible.begin(), feasible.end(),
                               [](const Candidate& a, const Candidate& b) {
                                 return a.scores < b.scores;
                               });
  const bool unique = std::all_of(feasible.begin(), feasible.end(), [&](const Candidate& c) {
    return &c == &*best || compare_sorted(best->scores, c.scores) == Domination::FirstDominates;
  });
  if (unique) return {best->chosen};

  std::vector<std::vector<Contract>> out;
  for (const auto& c : feasible) {
    const bool dominated = std::any_of(feasible.begin(), feasible.end(), [&](const Candidate& o) {
      return compare_sorted(o.scores, c.scores) == Domination::FirstDominates;
    });
    if (!dominated) out.push_back(c.chosen);
  }
  return out;
}

std::vector<Contract> oracle_undominated(const SubChoiceInput& input) {
  auto all = undominated_selections(input);
  if (all.size() != 1)
    throw std::logic_error(all.empty() ? "no reservation-satisfying selection exists"
                                       : "undominated selection is not unique");
  return all.front();
}

}  // namespace resmatch
