#include "hbt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hbt {

double geometric_sum(double r, std::int64_t from, std::int64_t to) {
  if (from > to) return 0.0;
  const double n = static_cast<double>(to - from + 1);
  if (r == 1.0) return n;
  return std::pow(r, static_cast<double>(from)) * (1.0 - std::pow(r, n)) / (1.0 - r);
}

double qpow(int q, double e) { return std::pow(static_cast<double>(q), e); }

Measure::Measure(const Params& p) : p_(p) {
  p_.validate();
  sector_factor_ = 1.0 / (1.0 - qpow(p_.q, 1.0 - p_.alpha));
}

double Measure::sigma_level(std::int64_t level) const {
  return qpow(p_.q, -p_.alpha * static_cast<double>(level));
}

std::int64_t gromov_level(double r) {
  const double t = -std::log(r);
  const double nearest = std::round(t);
  if (std::abs(t - nearest) < 1e-12) return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::ceil(t));
}

DyadicSet Measure::gromov_ball(const Vertex& x, double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("gromov_ball: radius must be > 0");
  const auto k = gromov_level(r);
  if (k > x.level()) return DyadicSet::singleton(x);
  return DyadicSet::sector(x.ancestor_at_level(k));
}

double Measure::doubling_constant() const { return std::max(qpow(p_.q, p_.alpha), sector_factor_); }

double Measure::doubling_ratio_sup(const std::vector<std::pair<Vertex, double>>& sample) const {
  if (sample.empty()) throw std::invalid_argument("doubling_ratio_sup: empty sample");
  double best = 0.0;
  for (const auto& [x, r] : sample) {
    if (!(r > 0.0)) throw std::invalid_argument("doubling_ratio_sup: radii must be > 0");
    best = std::max(best, ball_measure(x, 2.0 * r) / ball_measure(x, r));
  }
  return best;
}

int Measure::enumeration_limit() const {
  // Largest n whose ball 1 + (q+1)(q^n - 1)/(q-1) stays within 2^14 vertices.
  const double cap = 16384.0;
  int n = 0;
  const double q = p_.q;
  while (1.0 + (q + 1.0) * (std::pow(q, n + 1) - 1.0) / (q - 1.0) <= cap) ++n;
  return n;
}

double Measure::counting_ball_measure(const Vertex& v, int n) const {
  if (n < 0) throw std::invalid_argument("counting_ball_measure: n must be >= 0");
  if (n > enumeration_limit())
    throw std::invalid_argument("counting_ball_measure: n exceeds enumeration limit " +
                                std::to_string(enumeration_limit()));
  double total = 0.0;
  for (const auto& x : edge_ball(v, n, p_.q)) total += sigma(x);
  return total;
}

}  // namespace hbt
