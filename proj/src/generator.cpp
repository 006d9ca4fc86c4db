#include "resmatch/generator.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace resmatch {

std::size_t Rng::uniform(std::size_t lo, std::size_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = span == 0 ? 0 : (~std::uint64_t{0} / span) * span;
  std::uint64_t x = next();
  while (limit != 0 && x >= limit) x = next();
  return lo + static_cast<std::size_t>(span == 0 ? x : x % span);
}

std::string GeneratorParams::describe() const {
  std::ostringstream os;
  os << "individuals=" << (vary_sizes ? std::to_string(min_individuals) + ".." : "")
     << individuals << " institutions="
     << (vary_sizes ? std::to_string(min_institutions) + ".." : "") << institutions
     << " max_preferences=" << max_preferences << " max_capacity=" << max_capacity
     << " p_sc=" << p_sc << " p_st=" << p_st << " p_obc=" << p_obc
     << " p_declare=" << p_declare << " p_woman=" << p_woman
     << " p_disabled|woman=" << p_disabled_given_woman
     << " p_veteran|man=" << p_veteran_given_man << " p_reserved_seat=" << p_reserved_seat
     << " p_horizontal_reserve=" << p_horizontal_reserve << " score_range=" << score_range;
  return os.str();
}

Market generate_market(const GeneratorParams& params, std::uint64_t seed) {
  if (params.individuals > kMaxGeneratedIndividuals ||
      params.institutions > kMaxGeneratedInstitutions)
    throw std::invalid_argument("market size out of bounds");
  if (params.vary_sizes && (params.min_individuals > params.individuals ||
                            params.min_institutions > params.institutions))
    throw std::invalid_argument("minimum size exceeds maximum");
  if (params.max_capacity < 0 || params.score_range <= 0)
    throw std::invalid_argument("capacity and score range must be positive");

  Rng rng(seed);
  const std::size_t n = params.vary_sizes
                            ? rng.uniform(params.min_individuals, params.individuals)
                            : params.individuals;
  const std::size_t m = params.vary_sizes
                            ? rng.uniform(params.min_institutions, params.institutions)
                            : params.institutions;
  if (static_cast<std::size_t>(params.score_range) < n)
    throw std::invalid_argument("score range too small for distinct scores");

  Market market;
  market.horizontal_types = {{"women", "Women"},
                             {"disabled-women", "Women with disabilities"},
                             {"ex-servicemen", "Ex-servicemen"}};
  const std::size_t types = market.horizontal_types.size();

  for (std::size_t k = 0; k < m; ++k) {
    Institution inst;
    inst.id = "s" + std::to_string(k + 1);
    inst.capacity = static_cast<int>(rng.uniform(1, static_cast<std::size_t>(
                                                        std::max(1, params.max_capacity))));
    int left = inst.capacity;
    for (Category c : kReservedCategories) {
      if (left > 0 && rng.chance(params.p_reserved_seat)) {
        inst.vertical_reservations[index_of(c)] = 1;
        --left;
      }
    }
    market.institutions.push_back(std::move(inst));
  }

  for (std::size_t k = 0; k < n; ++k) {
    Individual ind;
    ind.id = "i" + std::to_string(k + 1);
    const double u = rng.unit();
    if (u < params.p_sc) {
      ind.membership = Category::SC;
    } else if (u < params.p_sc + params.p_st) {
      ind.membership = Category::ST;
    } else if (u < params.p_sc + params.p_st + params.p_obc) {
      ind.membership = Category::OBC;
    }
    if (ind.membership && rng.chance(params.p_declare)) ind.declared = ind.membership;
    if (rng.chance(params.p_woman)) {
      ind.horizontal_types.push_back(0);
      if (rng.chance(params.p_disabled_given_woman)) ind.horizontal_types.push_back(1);
    } else if (rng.chance(params.p_veteran_given_man)) {
      ind.horizontal_types.push_back(2);
    }
    market.individuals.push_back(std::move(ind));
  }

  for (auto& inst : market.institutions) {
    std::vector<std::size_t> pool(static_cast<std::size_t>(params.score_range));
    for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = k + 1;
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(pool[k], pool[rng.uniform(k, pool.size() - 1)]);
      inst.scores.push_back(static_cast<double>(pool[k]));
    }
  }

  for (auto& ind : market.individuals) {
    std::vector<Position> eligible;
    for (InstitutionIndex s = 0; s < m; ++s) {
      eligible.push_back({s, Category::GC});
      if (ind.declared) eligible.push_back({s, *ind.declared});
    }
    rng.shuffle(eligible);
    std::size_t length = 0;
    if (!rng.chance(params.p_empty_preferences) && params.max_preferences > 0)
      length = rng.uniform(1, std::min(params.max_preferences, eligible.size()));
    eligible.resize(length);
    ind.preferences = std::move(eligible);
  }

  const HorizontalHierarchy hierarchy(market);
  for (auto& inst : market.institutions) {
    for (Category c : kAllCategories) {
      auto& row = inst.horizontal_reservations[index_of(c)];
      row.assign(types, 0);
      const int cap = inst.category_capacity(c);
      if (cap <= 0) continue;
      for (auto& r : row)
        if (rng.chance(params.p_horizontal_reserve)) r = 1;
      // Drop reservations until the category can honour them.
      while (!reservations_applicable(hierarchy, row, cap, false)) {
        std::vector<std::size_t> positive;
        for (std::size_t t = 0; t < row.size(); ++t)
          if (row[t] > 0) positive.push_back(t);
        --row[positive[rng.uniform(0, positive.size() - 1)]];
      }
    }
  }
  return market;
}

}  // namespace resmatch
