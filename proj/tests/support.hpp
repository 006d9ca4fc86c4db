#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

#include "resmatch/audit.hpp"
#include "resmatch/generator.hpp"
#include "resmatch/model.hpp"

namespace testing {

using namespace resmatch;

inline std::vector<Contract> sorted(std::vector<Contract> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Generator settings shared by the randomized unit tests.
inline GeneratorParams small_markets() {
  GeneratorParams p;
  p.vary_sizes = true;
  p.individuals = 6;
  p.institutions = 3;
  return p;
}

// One institution "s", one category; individuals named p0, p1, ... with the
// given scores and horizontal types.
struct Pool {
  std::vector<double> scores;
  std::vector<std::vector<TypeIndex>> types;
  std::size_t type_count = 0;

  HorizontalHierarchy hierarchy() const { return HorizontalHierarchy(type_count, types); }
};

inline SubChoiceInput sub_input(const Pool& pool, const HorizontalHierarchy& h, int capacity,
                                std::vector<int> reserves,
                                std::vector<IndividualIndex> who = {}) {
  SubChoiceInput in;
  if (who.empty())
    for (IndividualIndex i = 0; i < pool.scores.size(); ++i) who.push_back(i);
  for (IndividualIndex i : who) in.contracts.push_back({i, 0, Category::GC});
  std::sort(in.contracts.begin(), in.contracts.end());
  in.capacity = capacity;
  in.reservations = std::move(reserves);
  in.scores = pool.scores;
  in.hierarchy = &h;
  return in;
}

inline std::vector<IndividualIndex> individuals(std::span<const Contract> cs) {
  std::vector<IndividualIndex> out;
  for (const auto& c : cs) out.push_back(c.individual);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace testing
