#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hbt/bergman.hpp"
#include "hbt/functions.hpp"

namespace hbt {

/// Seeded generator of random vertices and functions for the property suites.
class Sampler {
 public:
  Sampler(int q, std::uint64_t seed) : q_(q), rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// anchor in [-anchor_range, anchor_range], word length in [0, max_word].
  Vertex vertex(int anchor_range, int max_word);

  /// A vertex of U_v exactly `depth` levels below v.
  Vertex descendant(const Vertex& v, int depth);

  /// Zero-sum, not identically zero, values on q points.
  std::vector<double> zero_sum_values();

  /// `points` support points near r_0 with values in [-scale, scale].
  FiniteFunction finite_function(int points, int anchor_range, int max_word, double scale);

  /// Random combination of `terms` normalized basis functions.
  HarmonicCombo combo(int terms, int anchor_range, int max_word);

 private:
  int q_;
  std::mt19937_64 rng_;
};

}  // namespace hbt
