#pragma once

// Random inputs shared by the unit tests and the acceptance run.

#include <algorithm>

#include "hbt/harmonic.hpp"
#include "hbt/sampler.hpp"
#include "hbt/tree.hpp"

namespace fixture {

// Random g, finitely supported on HB_{n+1} and harmonic on HB_n: a sum of
// zero-sum seeds on S(y) for a few y at levels n-2..n, each carried down to
// level n+1 by its own extension.
inline hbt::FiniteFunction random_seed_function(hbt::Sampler& smp, int q, std::int64_t n) {
  hbt::FiniteFunction g;
  const int seeds = smp.uniform_int(1, 3);
  for (int s = 0; s < seeds; ++s) {
    const int up = smp.uniform_int(0, 2);
    auto y = smp.descendant(hbt::Vertex::geodesic(n - up - smp.uniform_int(0, 2)), smp.uniform_int(0, 2));
    y = y.ancestor_at_level(std::min(y.level(), n - up));
    hbt::FiniteFunction seed;
    const auto vals = smp.zero_sum_values();
    const auto kids = hbt::successors(y, q);
    for (int d = 0; d < q; ++d) seed.set(kids[d], vals[d]);
    const hbt::ExtendedFunction ext(seed, y.level(), q);
    for (std::int64_t k = y.level() + 1; k <= n + 1; ++k)
      for (const auto& x : hbt::sector_level_slice(y, static_cast<int>(k - y.level()), q)) g.add(x, ext(x));
  }
  return g;
}

}  // namespace fixture
