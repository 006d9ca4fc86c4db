#include "resmatch/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace resmatch {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::GC: return "GC";
    case Category::SC: return "SC";
    case Category::ST: return "ST";
    case Category::OBC: return "OBC";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view text) {
  for (Category c : kAllCategories) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::optional<std::size_t> Individual::rank_of(Position p) const {
  auto it = std::find(preferences.begin(), preferences.end(), p);
  if (it == preferences.end()) return std::nullopt;
  return static_cast<std::size_t>(it - preferences.begin());
}

bool Individual::prefers(std::optional<Position> a, std::optional<Position> b) const {
  // Unlisted pairs are unacceptable and rank below the outside option.
  auto key = [&](std::optional<Position> p) -> std::size_t {
    if (!p) return preferences.size();
    return rank_of(*p).value_or(preferences.size() + 1);
  };
  return key(a) < key(b);
}

int Institution::open_capacity() const {
  int reserved = 0;
  for (Category c : kReservedCategories) reserved += vertical_reservations[index_of(c)];
  return capacity - reserved;
}

int Institution::category_capacity(Category c) const {
  return c == Category::GC ? open_capacity() : vertical_reservations[index_of(c)];
}

int Institution::horizontal_reservation(Category c, TypeIndex t) const {
  const auto& row = horizontal_reservations[index_of(c)];
  return t < row.size() ? row[t] : 0;
}

std::optional<IndividualIndex> Market::find_individual(std::string_view id) const {
  for (std::size_t i = 0; i < individuals.size(); ++i)
    if (individuals[i].id == id) return i;
  return std::nullopt;
}

std::optional<InstitutionIndex> Market::find_institution(std::string_view id) const {
  for (std::size_t s = 0; s < institutions.size(); ++s)
    if (institutions[s].id == id) return s;
  return std::nullopt;
}

std::optional<TypeIndex> Market::find_type(std::string_view id) const {
  for (std::size_t t = 0; t < horizontal_types.size(); ++t)
    if (horizontal_types[t].id == id) return t;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// HorizontalHierarchy

HorizontalHierarchy::HorizontalHierarchy(std::size_t type_count,
                                         std::span<const std::vector<TypeIndex>> individual_types)
    : holders_(type_count), types_of_(individual_types.begin(), individual_types.end()) {
  for (std::size_t i = 0; i < types_of_.size(); ++i) {
    auto& ts = types_of_[i];
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (TypeIndex t : ts) {
      if (t >= type_count) throw std::out_of_range("horizontal type index out of range");
      holders_[t].push_back(i);
    }
  }
  build();
}

HorizontalHierarchy::HorizontalHierarchy(const Market& market) {
  std::vector<std::vector<TypeIndex>> types;
  types.reserve(market.individuals.size());
  for (const auto& ind : market.individuals) types.push_back(ind.horizontal_types);
  *this = HorizontalHierarchy(market.horizontal_types.size(), types);
}

void HorizontalHierarchy::build() {
  const std::size_t n = holders_.size();
  class_of_.assign(n, 0);
  std::vector<std::vector<TypeIndex>> groups;
  std::vector<const std::vector<IndividualIndex>*> group_holders;
  for (TypeIndex t = 0; t < n; ++t) {
    auto it = std::find_if(group_holders.begin(), group_holders.end(),
                           [&](const auto* h) { return *h == holders_[t]; });
    if (it == group_holders.end()) {
      groups.push_back({t});
      group_holders.push_back(&holders_[t]);
    } else {
      groups[static_cast<std::size_t>(it - group_holders.begin())].push_back(t);
    }
  }

  const std::size_t g = groups.size();
  auto strict_subset = [](const std::vector<IndividualIndex>& inner,
                          const std::vector<IndividualIndex>& outer) {
    return inner.size() < outer.size() &&
           std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
  };
  std::vector<std::vector<bool>> contains(g, std::vector<bool>(g, false));
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b)
      if (a != b) contains[a][b] = strict_subset(*group_holders[b], *group_holders[a]);

  // Layer = length of the longest strictly descending containment chain.
  std::vector<std::size_t> layer(g, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < g; ++a)
      for (std::size_t b = 0; b < g; ++b)
        if (contains[a][b] && layer[a] < layer[b] + 1) {
          layer[a] = layer[b] + 1;
          changed = true;
        }
  }

  std::vector<std::size_t> order(g);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(layer[a], groups[a].front()) < std::pair(layer[b], groups[b].front());
  });

  classes_.clear();
  std::vector<std::size_t> position(g);
  for (std::size_t k = 0; k < g; ++k) {
    position[order[k]] = k;
    classes_.push_back({groups[order[k]], layer[order[k]]});
    for (TypeIndex t : groups[order[k]]) class_of_[t] = k;
  }
  class_contains_.assign(g, std::vector<bool>(g, false));
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b) class_contains_[position[a]][position[b]] = contains[a][b];
}

const std::vector<IndividualIndex>& HorizontalHierarchy::holders(TypeIndex t) const {
  return holders_.at(t);
}

bool HorizontalHierarchy::holds(IndividualIndex i, TypeIndex t) const {
  const auto& ts = types_of_.at(i);
  return std::binary_search(ts.begin(), ts.end(), t);
}

bool HorizontalHierarchy::contains(TypeIndex outer, TypeIndex inner) const {
  return class_contains_[class_of_.at(outer)][class_of_.at(inner)];
}

bool HorizontalHierarchy::class_contains(std::size_t outer, std::size_t inner) const {
  return class_contains_.at(outer).at(inner);
}

std::vector<std::pair<TypeIndex, TypeIndex>> HorizontalHierarchy::broken_pairs() const {
  std::vector<std::pair<TypeIndex, TypeIndex>> out;
  for (TypeIndex a = 0; a < holders_.size(); ++a) {
    for (TypeIndex b = a + 1; b < holders_.size(); ++b) {
      const auto& ha = holders_[a];
      const auto& hb = holders_[b];
      std::vector<IndividualIndex> common;
      std::set_intersection(ha.begin(), ha.end(), hb.begin(), hb.end(),
                            std::back_inserter(common));
      if (!common.empty() && common.size() != ha.size() && common.size() != hb.size())
        out.emplace_back(a, b);
    }
  }
  return out;
}

bool HorizontalHierarchy::covers(IndividualIndex a, IndividualIndex b) const {
  const auto& ta = types_of_.at(a);
  const auto& tb = types_of_.at(b);
  return std::includes(ta.begin(), ta.end(), tb.begin(), tb.end());
}

// ---------------------------------------------------------------------------
// Applicability

int minimum_reserved_seats(const HorizontalHierarchy& hierarchy,
                           std::span<const IndividualIndex> pool, std::span<const int> reserves) {
  const auto& classes = hierarchy.classes();
  const std::size_t g = classes.size();
  std::vector<int> count(g, 0);
  std::vector<int> reserve(g, 0);
  for (std::size_t c = 0; c < g; ++c) {
    for (TypeIndex t : classes[c].members)
      reserve[c] = std::max(reserve[c], t < reserves.size() ? reserves[t] : 0);
    const TypeIndex rep = classes[c].members.front();
    for (IndividualIndex i : pool)
      if (hierarchy.holds(i, rep)) ++count[c];
  }
  // Classes are sorted bottom-up, so children are final before their parents.
  std::vector<int> need(g, 0);
  std::vector<bool> has_parent(g, false);
  for (std::size_t c = 0; c < g; ++c) {
    int from_children = 0;
    for (std::size_t d = 0; d < c; ++d) {
      if (!hierarchy.class_contains(c, d)) continue;
      bool direct = true;
      for (std::size_t e = 0; e < g && direct; ++e)
        if (e != c && e != d && hierarchy.class_contains(c, e) && hierarchy.class_contains(e, d))
          direct = false;
      if (direct) {
        from_children += need[d];
        has_parent[d] = true;
      }
    }
    need[c] = std::max(std::min(reserve[c], count[c]), from_children);
  }
  int total = 0;
  for (std::size_t c = 0; c < g; ++c)
    if (!has_parent[c]) total += need[c];
  return total;
}

bool reservations_applicable(const HorizontalHierarchy& hierarchy, std::span<const int> reserves,
                             int capacity, bool exhaustive) {
  const std::size_t n = hierarchy.individual_count();
  if (!exhaustive || n > kExhaustiveApplicabilityLimit) {
    // The seat requirement is monotone in the pool, so the whole market is the worst case.
    std::vector<IndividualIndex> all(n);
    std::iota(all.begin(), all.end(), 0);
    return minimum_reserved_seats(hierarchy, all, reserves) <= capacity;
  }
  std::vector<IndividualIndex> pool;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    pool.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) pool.push_back(i);
    if (minimum_reserved_seats(hierarchy, pool, reserves) > capacity) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

template <class Range, class Proj>
void check_unique_ids(const Range& items, Proj proj, std::string_view what,
                      std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    const std::string& id = proj(item);
    if (id.empty()) out.push_back({"empty id", std::string(what) + " with empty id"});
    if (!seen.insert(id).second)
      out.push_back({"duplicate id", std::string(what) + " id '" + id + "' repeated"});
  }
}

}  // namespace

ValidationReport validate_market(const Market& market) {
  ValidationReport report;
  auto& out = report.violations;
  const std::size_t n = market.individuals.size();
  const std::size_t types = market.horizontal_types.size();

  check_unique_ids(market.individuals, [](const Individual& i) -> const std::string& { return i.id; },
                   "individual", out);
  check_unique_ids(market.institutions,
                   [](const Institution& s) -> const std::string& { return s.id; }, "institution",
                   out);
  check_unique_ids(market.horizontal_types,
                   [](const HorizontalType& h) -> const std::string& { return h.id; },
                   "horizontal type", out);

  for (const auto& ind : market.individuals) {
    if (ind.membership == Category::GC || ind.declared == Category::GC)
      out.push_back({"bad membership", ind.id + ": GC is not a reserved category"});
    if (ind.declared && ind.declared != ind.membership)
      out.push_back({"bad declaration", ind.id + ": declares a category outside its membership"});
    for (TypeIndex t : ind.horizontal_types)
      if (t >= types) out.push_back({"unknown type", ind.id + ": unknown horizontal type"});
    std::set<Position> seen;
    for (const auto& p : ind.preferences) {
      if (p.institution >= market.institutions.size()) {
        out.push_back({"unknown institution", ind.id + ": ranks an unknown institution"});
        continue;
      }
      const std::string where =
          market.institutions[p.institution].id + "," + std::string(to_string(p.category));
      if (!seen.insert(p).second)
        out.push_back({"duplicate preference", ind.id + ": (" + where + ") listed twice"});
      if (!ind.can_claim(p.category))
        out.push_back({"unacceptable pair", ind.id + ": ranks (" + where +
                                                 ") but cannot claim that category"});
    }
  }

  for (const auto& inst : market.institutions) {
    if (inst.capacity < 0) out.push_back({"negative capacity", inst.id});
    int reserved = 0;
    for (Category c : kReservedCategories) {
      const int r = inst.vertical_reservations[index_of(c)];
      if (r < 0)
        out.push_back({"negative reservation", inst.id + ": " + std::string(to_string(c))});
      reserved += r;
    }
    if (reserved > inst.capacity)
      out.push_back({"reservations exceed capacity",
                     inst.id + ": " + std::to_string(reserved) + " reserved of " +
                         std::to_string(inst.capacity)});
    if (inst.scores.size() != n) {
      out.push_back({"missing score", inst.id + ": score vector does not cover every individual"});
    } else {
      std::map<double, IndividualIndex> by_score;
      for (IndividualIndex i = 0; i < n; ++i) {
        const double k = inst.scores[i];
        if (std::isnan(k)) {
          out.push_back({"missing score", inst.id + ": no score for " + market.individuals[i].id});
          continue;
        }
        if (!std::isfinite(k) || k < 0)
          out.push_back({"bad score", inst.id + ": score of " + market.individuals[i].id +
                                          " must be a non-negative real"});
        auto [it, fresh] = by_score.emplace(k, i);
        if (!fresh)
          out.push_back({"duplicate score", "duplicate score at " + inst.id + ": " +
                                                market.individuals[it->second].id + " and " +
                                                market.individuals[i].id});
      }
    }
    for (Category c : kAllCategories) {
      const auto& row = inst.horizontal_reservations[index_of(c)];
      if (row.size() > types)
        out.push_back({"unknown type", inst.id + ": reservation for an unknown horizontal type"});
      for (int r : row)
        if (r < 0)
          out.push_back({"negative reservation",
                         inst.id + ": horizontal reservation in " + std::string(to_string(c))});
    }
  }

  bool types_ok = true;
  for (const auto& ind : market.individuals)
    for (TypeIndex t : ind.horizontal_types) types_ok = types_ok && t < types;
  if (!types_ok) return report;

  const HorizontalHierarchy hierarchy(market);
  for (auto [a, b] : hierarchy.broken_pairs())
    out.push_back({"hierarchy broken", market.horizontal_types[a].id + " and " +
                                           market.horizontal_types[b].id +
                                           " overlap without containment"});
  if (!hierarchy.is_hierarchical()) return report;

  const bool exhaustive = n <= kExhaustiveApplicabilityLimit;
  report.applicability_exhaustive = exhaustive;
  for (const auto& inst : market.institutions) {
    for (Category c : kAllCategories) {
      const auto& row = inst.horizontal_reservations[index_of(c)];
      if (std::all_of(row.begin(), row.end(), [](int r) { return r <= 0; })) continue;
      const int cap = std::max(0, inst.category_capacity(c));
      if (!reservations_applicable(hierarchy, row, cap, exhaustive))
        out.push_back({"not applicable", inst.id + ": horizontal reservations in " +
                                             std::string(to_string(c)) + " need more than " +
                                             std::to_string(cap) + " seats"});
    }
  }
  return report;
}

bool contains(const Market& market, std::string_view outer, std::string_view inner) {
  auto a = market.find_type(outer);
  auto b = market.find_type(inner);
  if (!a || !b) throw std::out_of_range("unknown horizontal type");
  return HorizontalHierarchy(market).contains(*a, *b);
}

std::vector<Contract> contracts_of(const Market& market, IndividualIndex i) {
  std::vector<Contract> out;
  const auto& ind = market.individuals.at(i);
  for (const auto& p : ind.preferences)
    if (ind.can_claim(p.category)) out.push_back({i, p.institution, p.category});
  return out;
}

std::vector<Contract> build_contract_universe(const Market& market) {
  std::vector<Contract> out;
  for (IndividualIndex i = 0; i < market.individuals.size(); ++i) {
    auto mine = contracts_of(market, i);
    out.insert(out.end(), mine.begin(), mine.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_feasible(std::span<const Contract> matching, const Market& market) {
  std::vector<int> per_individual(market.individuals.size(), 0);
  std::vector<int> per_institution(market.institutions.size(), 0);
  for (const auto& c : matching) {
    if (++per_individual.at(c.individual) > 1) return false;
    if (++per_institution.at(c.institution) > market.institutions[c.institution].capacity)
      return false;
  }
  return true;
}

std::optional<Position> assignment_of(std::span<const Contract> matching, IndividualIndex i) {
  for (const auto& c : matching)
    if (c.individual == i) return c.position();
  return std::nullopt;
}

std::string describe(const Market& market, const Contract& c) {
  std::ostringstream os;
  os << '(' << market.individuals.at(c.individual).id << ','
     << market.institutions.at(c.institution).id << ',' << to_string(c.category) << ')';
  return os.str();
}

Market break_score_ties(Market market) {
  for (auto& inst : market.institutions) {
    auto& scores = inst.scores;
    std::vector<IndividualIndex> order;
    for (IndividualIndex i = 0; i < scores.size(); ++i)
      if (!std::isnan(scores[i])) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](IndividualIndex a, IndividualIndex b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return market.individuals[a].id < market.individuals[b].id;
    });
    for (std::size_t lo = 0; lo < order.size();) {
      std::size_t hi = lo;
      while (hi < order.size() && scores[order[hi]] == scores[order[lo]]) ++hi;
      const double base = scores[order[lo]];
      const double below = hi < order.size() ? scores[order[hi]] : base - 1.0;
      const double step = (base - below) / static_cast<double>(hi - lo + 1);
      for (std::size_t k = lo + 1; k < hi; ++k)
        scores[order[k]] = base - step * static_cast<double>(k - lo);
      lo = hi;
    }
  }
  return market;
}

}  // namespace resmatch
