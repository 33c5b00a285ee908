#pragma once

#include <stdexcept>
#include <string>

namespace hbt {

/// Largest branching parameter supported; digits are written in base 36.
inline constexpr int kMaxQ = 36;

/// Tree and measure parameters: each vertex has q+1 neighbours and the
/// measure is sigma_alpha(x) = q^{-alpha <x>}.
struct Params {
  int q = 2;
  double alpha = 2.0;
  double tol = 1e-9;  // relative tolerance for identity checks
  int depth = 40;     // truncation depth for oracles

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const {
    if (q < 2 || q > kMaxQ)
      throw std::invalid_argument("q must be an integer in [2, " + std::to_string(kMaxQ) + "]");
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must be > 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  }

  static Params make(int q, double alpha, double tol = 1e-9, int depth = 40) {
    Params p{q, alpha, tol, depth};
    p.validate();
    return p;
  }
};

}  // namespace hbt
