#include "hbt/lumped.hpp"

#include <cmath>
#include <stdexcept>

namespace hbt {

LumpedGrid::LumpedGrid(const Measure& m, const Vertex& root, std::int64_t frontier_level,
                       std::int64_t max_level) {
  if (frontier_level < root.level() || max_level < frontier_level)
    throw std::invalid_argument("LumpedGrid: need <root> <= frontier_level <= max_level");
  const int q = m.q();
  if (std::pow(static_cast<double>(q), static_cast<double>(frontier_level - root.level())) > 5e7)
    throw std::invalid_argument("LumpedGrid: more than 5e7 vertices above the frontier");
  std::vector<Vertex> layer{root};
  for (auto lvl = root.level();; ++lvl) {
    for (const auto& x : layer) points_.push_back({x, m.sigma_level(lvl)});
    if (lvl == frontier_level) break;
    std::vector<Vertex> next;
    next.reserve(layer.size() * static_cast<std::size_t>(q));
    for (const auto& x : layer)
      for (int d = 0; d < q; ++d) next.push_back(x.child(static_cast<Vertex::Digit>(d)));
    layer = std::move(next);
  }
  for (const auto& u : layer) {
    Vertex rep = u;
    for (auto lvl = frontier_level + 1; lvl <= max_level; ++lvl) {
      rep = rep.child(0);
      const double mult = std::pow(static_cast<double>(q), static_cast<double>(lvl - frontier_level));
      points_.push_back({rep, mult * m.sigma_level(lvl)});
    }
  }
  truncated_mass_ = m.sector_measure_level(max_level + 1) *
                    std::pow(static_cast<double>(q), static_cast<double>(max_level + 1 - root.level()));
}

std::vector<double> LumpedGrid::sample(const VertexFn& f) const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(f(p.x));
  return out;
}

double LumpedGrid::dot(const std::vector<double>& f, const std::vector<double>& g) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) s += points_[i].weight * f[i] * g[i];
  return s;
}

}  // namespace hbt
