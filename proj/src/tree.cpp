#include "hbt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hbt {

std::vector<Vertex> successors(const Vertex& x, int q) {
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(q));
  for (int d = 0; d < q; ++d) out.push_back(x.child(static_cast<Vertex::Digit>(d)));
  return out;
}

std::vector<Vertex> neighbours(const Vertex& x, int q) {
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(q) + 1);
  out.push_back(x.predecessor());
  for (int d = 0; d < q; ++d) out.push_back(x.child(static_cast<Vertex::Digit>(d)));
  return out;
}

Vertex confluent(const Vertex& x, const Vertex& y) {
  if (x.anchor() != y.anchor()) return Vertex::geodesic(std::min(x.anchor(), y.anchor()));
  const auto& a = x.word();
  const auto& b = y.word();
  auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return Vertex(x.anchor(), Vertex::Word(a.begin(), ia));
}

std::int64_t distance_d(const Vertex& x, const Vertex& y) {
  const auto c = confluent(x, y).level();
  return (x.level() - c) + (y.level() - c);
}

double gromov_rho(const Vertex& x, const Vertex& y) {
  if (x == y) return 0.0;
  return std::exp(-static_cast<double>(confluent(x, y).level()));
}

bool in_sector(const Vertex& v, const Vertex& x) {
  if (x.level() < v.level()) return false;
  if (x.anchor() == v.anchor()) {
    const auto& w = v.word();
    const auto& u = x.word();
    return w.size() <= u.size() && std::equal(w.begin(), w.end(), u.begin());
  }
  // Different anchors: only a geodesic v at or above x's anchor can contain x.
  return v.on_geodesic() && v.anchor() < x.anchor();
}

std::vector<Vertex> sector_level_slice(const Vertex& v, int n, int q) {
  if (n < 0) throw std::invalid_argument("sector_level_slice: n must be >= 0");
  if (static_cast<double>(n) * std::log2(static_cast<double>(q)) > 26.0)
    throw std::invalid_argument("sector_level_slice: slice too large to enumerate");
  std::vector<Vertex> cur{v};
  for (int i = 0; i < n; ++i) {
    std::vector<Vertex> next;
    next.reserve(cur.size() * static_cast<std::size_t>(q));
    for (const auto& u : cur)
      for (int d = 0; d < q; ++d) next.push_back(u.child(static_cast<Vertex::Digit>(d)));
    cur = std::move(next);
  }
  return cur;
}

std::vector<Vertex> edge_ball(const Vertex& v, int n, int q) {
  if (n < 0) throw std::invalid_argument("edge_ball: n must be >= 0");
  // Each vertex of a shell is entered from exactly one neighbour.
  std::vector<Vertex> out{v};
  std::vector<std::pair<Vertex, Vertex>> shell;  // (vertex, entered from)
  for (auto& y : neighbours(v, q)) shell.emplace_back(std::move(y), v);
  for (int step = 1; step <= n; ++step) {
    std::vector<std::pair<Vertex, Vertex>> next;
    for (auto& [x, from] : shell) {
      if (step < n)
        for (auto& y : neighbours(x, q))
          if (y != from) next.emplace_back(std::move(y), x);
      out.push_back(std::move(x));
    }
    shell = std::move(next);
  }
  return out;
}

bool DyadicSet::subset_of(const DyadicSet& other) const {
  if (!other.is_sector()) return !is_sector() && v == other.v;
  return in_sector(other.v, v);
}

std::string DyadicSet::to_string() const {
  return is_sector() ? "U(" + v.to_string() + ")" : "{" + v.to_string() + "}";
}

DyadicSet dyadic_cell(const Vertex& x, std::int64_t k) {
  if (x.level() >= k) return DyadicSet::sector(x.ancestor_at_level(k));
  return DyadicSet::singleton(x);
}

}  // namespace hbt
