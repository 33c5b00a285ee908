#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hbt/params.hpp"
#include "hbt/tree.hpp"

namespace hbt {

/// Sum_{j=from}^{to} r^j; zero when from > to.
double geometric_sum(double r, std::int64_t from, std::int64_t to);

/// q^e for integer exponent, computed without accumulating rounding.
double qpow(int q, double e);

/// The horocyclic measure sigma_alpha(x) = q^{-alpha <x>} and its values on
/// sectors and Gromov balls. All values are closed forms except the
/// edge-distance balls, which are enumerated.
class Measure {
 public:
  explicit Measure(const Params& p);

  const Params& params() const { return p_; }
  int q() const { return p_.q; }
  double alpha() const { return p_.alpha; }

  double sigma_level(std::int64_t level) const;
  double sigma(const Vertex& x) const { return sigma_level(x.level()); }

  /// sigma(U_v) = q^{-alpha <v>} / (1 - q^{1-alpha}).
  double sector_measure_level(std::int64_t level) const { return sigma_level(level) * sector_factor_; }
  double sector_measure(const Vertex& v) const { return sector_measure_level(v.level()); }

  double measure(const DyadicSet& d) const { return d.is_sector() ? sector_measure(d.v) : sigma(d.v); }

  /// 1 / (1 - q^{1-alpha}) = sigma(U_v) / sigma(v).
  double sector_factor() const { return sector_factor_; }

  /// The closed Gromov ball {y : rho(x, y) <= r}; r > 0.
  DyadicSet gromov_ball(const Vertex& x, double r) const;
  double ball_measure(const Vertex& x, double r) const { return measure(gromov_ball(x, r)); }

  /// k_alpha = max{q^alpha, 1/(1 - q^{1-alpha})}.
  double doubling_constant() const;

  /// max over the sample of ball_measure(x, 2r) / ball_measure(x, r).
  double doubling_ratio_sup(const std::vector<std::pair<Vertex, double>>& sample) const;

  /// Largest radius accepted by counting_ball_measure for this q.
  int enumeration_limit() const;

  /// sigma(B_d(v, n)) by exhaustive enumeration of the edge-distance ball.
  double counting_ball_measure(const Vertex& v, int n) const;

 private:
  Params p_;
  double sector_factor_;
};

/// Smallest integer k with k >= -log(r): the confluent level a vertex y != x
/// must reach for rho(x, y) <= r. Values within 1e-12 of an integer snap to it.
std::int64_t gromov_level(double r);

}  // namespace hbt
