#pragma once

#include <cstdint>
#include <vector>

#include "hbt/functions.hpp"

namespace hbt {

/// Sample points for summing over { x in U_root : <x> <= max_level }.
///
/// Vertices down to `frontier_level` are listed one by one. Below the
/// frontier each slice U_u ∩ H_k (u on the frontier) is represented by a
/// single vertex carrying weight q^{k - frontier_level} sigma(k). The sum is
/// exact for any integrand that is constant on those slices, which holds for
/// basis functions and kernel columns whose generators lie above the frontier.
class LumpedGrid {
 public:
  struct Point {
    Vertex x;
    double weight;  // multiplicity times sigma
  };

  LumpedGrid(const Measure& m, const Vertex& root, std::int64_t frontier_level, std::int64_t max_level);

  const std::vector<Point>& points() const { return points_; }

  std::vector<double> sample(const VertexFn& f) const;

  /// sum_i w_i f_i g_i.
  double dot(const std::vector<double>& f, const std::vector<double>& g) const;

  /// sigma({x in U_root : <x> > max_level}).
  double truncated_mass() const { return truncated_mass_; }

 private:
  std::vector<Point> points_;
  double truncated_mass_;
};

}  // namespace hbt
