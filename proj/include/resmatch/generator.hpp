#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "resmatch/model.hpp"

namespace resmatch {

// Random market parameters. Every report records the values it ran with.
struct GeneratorParams {
  std::size_t individuals = 5;
  std::size_t institutions = 2;
  std::size_t min_individuals = 2;   // used when sizes are drawn per market
  std::size_t min_institutions = 1;
  bool vary_sizes = false;           // draw sizes uniformly from [min, max]
  std::size_t max_preferences = 4;
  int max_capacity = 3;
  double p_sc = 0.20;
  double p_st = 0.15;
  double p_obc = 0.25;
  double p_declare = 0.85;
  double p_empty_preferences = 0.05;
  // Horizontal types: women, disabled women (nested in women), ex-servicemen
  // (disjoint from women).
  double p_woman = 0.40;
  double p_disabled_given_woman = 0.35;
  double p_veteran_given_man = 0.20;
  double p_reserved_seat = 0.45;       // per reserved category, one set-aside seat
  double p_horizontal_reserve = 0.40;  // per (institution, category, type)
  int score_range = 1000;

  std::string describe() const;
};

constexpr std::size_t kMaxGeneratedIndividuals = 1000;
constexpr std::size_t kMaxGeneratedInstitutions = 100;

// Portable draws on top of a 64-bit Mersenne twister, so a seed yields the
// same market on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform in [lo, hi].
  std::size_t uniform(std::size_t lo, std::size_t hi);
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[uniform(0, k - 1)]);
  }

 private:
  std::mt19937_64 engine_;
};

// A valid market. Throws std::invalid_argument for sizes outside the bounds above.
Market generate_market(const GeneratorParams& params, std::uint64_t seed);

}  // namespace resmatch
