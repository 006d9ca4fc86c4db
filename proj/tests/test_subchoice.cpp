#include <numeric>

#include "doctest.h"
#include "resmatch/subchoice.hpp"
#include "support.hpp"

using namespace testing;

namespace {

// Dominance by trying every bijection.
Domination brute_compare(std::vector<IndividualIndex> a, std::vector<IndividualIndex> b,
                         const std::vector<double>& scores) {
  auto dominates = [&](const std::vector<IndividualIndex>& x, std::vector<IndividualIndex> y) {
    std::sort(y.begin(), y.end());
    do {
      bool weak = true, strict = false;
      for (std::size_t k = 0; k < x.size(); ++k) {
        weak = weak && scores[x[k]] >= scores[y[k]];
        strict = strict || scores[x[k]] > scores[y[k]];
      }
      if (weak && strict) return true;
    } while (std::next_permutation(y.begin(), y.end()));
    return false;
  };
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) return Domination::Equal;
  const bool ab = dominates(a, b);
  const bool ba = dominates(b, a);
  if (ab) return Domination::FirstDominates;
  if (ba) return Domination::SecondDominates;
  // Distinct sets with the same multiset of scores cannot occur with distinct scores.
  return Domination::Incomparable;
}

}  // namespace

TEST_CASE("merit comparison") {
  const std::vector<double> scores{40, 30, 20, 10};  // i1 > i2 > i3 > i4
  const std::vector<IndividualIndex> i1i4{0, 3}, i2i3{1, 2}, i1i2{0, 1}, i1i3{0, 2};
  CHECK(merit_compare(i1i4, i2i3, scores) == Domination::Incomparable);
  CHECK(merit_compare(i1i2, i1i2, scores) == Domination::Equal);
  CHECK(merit_compare(i1i3, i2i3, scores) == Domination::FirstDominates);
  CHECK(merit_compare(i2i3, i1i3, scores) == Domination::SecondDominates);
  CHECK(merit_compare(std::vector<IndividualIndex>{}, std::vector<IndividualIndex>{}, scores) ==
        Domination::Equal);
  CHECK_THROWS_AS(merit_compare(i1i2, std::vector<IndividualIndex>{0}, scores),
                  std::invalid_argument);
  CHECK(to_string(Domination::FirstDominates) == "first_dominates");
}

TEST_CASE("merit comparison agrees with bijection search") {
  Rng rng(3);
  for (int round = 0; round < 2000; ++round) {
    const std::size_t pool = rng.uniform(1, 7);
    std::vector<double> scores(pool);
    std::iota(scores.begin(), scores.end(), 1.0);
    rng.shuffle(scores);
    const std::size_t size = rng.uniform(0, std::min<std::size_t>(pool, 5));
    std::vector<IndividualIndex> all(pool);
    std::iota(all.begin(), all.end(), 0);
    rng.shuffle(all);
    std::vector<IndividualIndex> a(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
    rng.shuffle(all);
    std::vector<IndividualIndex> b(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
    CHECK(merit_compare(a, b, scores) == brute_compare(a, b, scores));
  }
}

TEST_CASE("c_hier on small examples") {
  SUBCASE("pure merit without types") {
    const Pool pool{{90, 80, 70}, {{}, {}, {}}, 0};
    const auto h = pool.hierarchy();
    const auto in = sub_input(pool, h, 2, {});
    CHECK(individuals(c_hier(in)) == std::vector<IndividualIndex>{0, 1});
    CHECK(c_hier(in) == oracle_undominated(in));
  }
  SUBCASE("one women seat") {
    const Pool pool{{90, 80, 70}, {{}, {0}, {0}}, 1};
    const auto h = pool.hierarchy();
    const auto in = sub_input(pool, h, 2, {1});
    CHECK(individuals(c_hier(in)) == std::vector<IndividualIndex>{0, 1});
    CHECK(c_hier(in) == oracle_undominated(in));
  }
  SUBCASE("nested women and disabled-women seats") {
    // type 0 = women, type 1 = disabled women
    const Pool pool{{90, 80, 70}, {{0}, {0, 1}, {}}, 2};
    const auto h = pool.hierarchy();
    const auto in = sub_input(pool, h, 2, {1, 1});
    CHECK(individuals(c_hier(in)) == std::vector<IndividualIndex>{0, 1});
    CHECK(c_hier(in) == oracle_undominated(in));
  }
  SUBCASE("a reserve pulls in a lower score") {
    const Pool pool{{90, 80, 70}, {{}, {}, {0}}, 1};
    const auto h = pool.hierarchy();
    const auto in = sub_input(pool, h, 2, {1});
    CHECK(individuals(c_hier(in)) == std::vector<IndividualIndex>{0, 2});
    CHECK(c_hier(in) == oracle_undominated(in));
  }
  SUBCASE("types with the same holders share one reserve") {
    // A and B both held by p0, p1; outsider p2 has the top score.
    const Pool pool{{20, 10, 30}, {{0, 1}, {0, 1}, {}}, 2};
    const auto h = pool.hierarchy();
    const auto in = sub_input(pool, h, 2, {1, 1});
    CHECK(individuals(c_hier(in)) == std::vector<IndividualIndex>{0, 2});
    CHECK(c_hier(in) == oracle_undominated(in));
  }
  SUBCASE("degenerate inputs") {
    const Pool pool{{90, 80}, {{0}, {}}, 1};
    const auto h = pool.hierarchy();
    CHECK(c_hier(sub_input(pool, h, 0, {1})).empty());
    CHECK_THROWS_AS(oracle_undominated(sub_input(pool, h, 0, {1})), std::logic_error);
    SubChoiceInput empty = sub_input(pool, h, 2, {1});
    empty.contracts.clear();
    CHECK(c_hier(empty).empty());
    CHECK(oracle_undominated(empty).empty());
  }
}

TEST_CASE("satisfies_horizontal") {
  const Pool pool{{90, 80, 70}, {{0}, {0}, {}}, 1};
  const auto h = pool.hierarchy();
  const auto in = sub_input(pool, h, 2, {2});
  CHECK_FALSE(satisfies_horizontal(std::vector<Contract>{{0, 0, Category::GC}, {2, 0, Category::GC}}, in));
  CHECK(satisfies_horizontal(std::vector<Contract>{{0, 0, Category::GC}, {1, 0, Category::GC}}, in));

  const auto one_woman = sub_input(pool, h, 2, {2}, {0, 2});
  CHECK(satisfies_horizontal(std::vector<Contract>{{0, 0, Category::GC}, {2, 0, Category::GC}},
                             one_woman));
  const auto no_reserve = sub_input(pool, h, 2, {0});
  CHECK(satisfies_horizontal(std::vector<Contract>{}, no_reserve));
  CHECK(satisfies_horizontal(std::vector<Contract>{{2, 0, Category::GC}}, no_reserve));
}

TEST_CASE("c_hier matches the oracle on random inputs with up to 8 individuals and 3 types") {
  // Chains of three nested types, and a nested pair beside a disjoint type.
  const std::vector<std::vector<std::vector<TypeIndex>>> structures{
      {{}, {0}, {0, 1}, {0, 1, 2}},
      {{}, {0}, {0, 1}, {2}},
  };
  Rng rng(17);
  std::size_t compared = 0;
  for (int round = 0; round < 3000; ++round) {
    const auto& profiles = structures[rng.uniform(0, structures.size() - 1)];
    const std::size_t n = rng.uniform(0, 8);
    Pool pool;
    pool.type_count = 3;
    for (std::size_t k = 0; k < n; ++k) {
      pool.scores.push_back(static_cast<double>(rng.uniform(0, 100000)) + static_cast<double>(k) * 1e-6);
      pool.types.push_back(profiles[rng.uniform(0, profiles.size() - 1)]);
    }
    const auto h = pool.hierarchy();
    std::vector<int> res(3);
    for (auto& r : res) r = static_cast<int>(rng.uniform(0, 3));
    const int cap = static_cast<int>(rng.uniform(0, 5));
    if (!reservations_applicable(h, res, cap, true)) continue;
    const auto in = sub_input(pool, h, cap, res);
    SubChoiceDiagnostics diag;
    const auto got = c_hier(in, &diag);
    CHECK(got == oracle_undominated(in));
    CHECK(diag.messages.empty());
    CHECK(satisfies_horizontal(got, in));
    CHECK(got.size() == std::min<std::size_t>(n, static_cast<std::size_t>(cap)));
    ++compared;
  }
  CHECK(compared > 1000);
}

TEST_CASE("sibling processing order does not matter") {
  // Relabelling types changes the order siblings are visited in, not the outcome.
  Rng rng(19);
  for (int round = 0; round < 1000; ++round) {
    const std::vector<std::vector<TypeIndex>> profiles{{}, {0}, {1}, {2}, {0, 3}};
    const std::size_t n = rng.uniform(1, 8);
    Pool pool;
    pool.type_count = 4;
    for (std::size_t k = 0; k < n; ++k) {
      pool.scores.push_back(static_cast<double>(n - k));
      pool.types.push_back(profiles[rng.uniform(0, profiles.size() - 1)]);
    }
    std::vector<int> res(4);
    for (auto& r : res) r = static_cast<int>(rng.uniform(0, 2));
    const int cap = static_cast<int>(rng.uniform(0, 5));
    const auto h = pool.hierarchy();
    if (!reservations_applicable(h, res, cap, true)) continue;

    std::vector<TypeIndex> perm{0, 1, 2, 3};
    rng.shuffle(perm);
    Pool relabelled = pool;
    std::vector<int> res2(4);
    for (std::size_t k = 0; k < n; ++k) {
      for (auto& t : relabelled.types[k]) t = perm[t];
      std::sort(relabelled.types[k].begin(), relabelled.types[k].end());
    }
    for (TypeIndex t = 0; t < 4; ++t) res2[perm[t]] = res[t];
    const auto h2 = relabelled.hierarchy();
    CHECK(c_hier(sub_input(pool, h, cap, res)) == c_hier(sub_input(relabelled, h2, cap, res2)));
  }
}

TEST_CASE("running out of seats during the reserve phase is diagnosed") {
  const Pool pool{{90, 80}, {{0}, {1}}, 2};
  const auto h = pool.hierarchy();
  const auto in = sub_input(pool, h, 1, {1, 1});
  CHECK_FALSE(reservations_applicable(h, in.reservations, 1, true));
  SubChoiceDiagnostics diag;
  const auto got = c_hier(in, &diag);
  CHECK(got.size() == 1);
  CHECK_FALSE(diag.messages.empty());
}

TEST_CASE("the oracle refuses large inputs") {
  Pool pool;
  for (std::size_t k = 0; k <= kOracleLimit; ++k) {
    pool.scores.push_back(static_cast<double>(k));
    pool.types.emplace_back();
  }
  const auto h = pool.hierarchy();
  CHECK_THROWS_AS(oracle_undominated(sub_input(pool, h, 2, {})), std::length_error);
}
