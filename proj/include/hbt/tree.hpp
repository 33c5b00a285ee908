#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbt/vertex.hpp"

namespace hbt {

/// The q successors of x in canonical order (digit 0 first).
std::vector<Vertex> successors(const Vertex& x, int q);

/// p(x) followed by the successors of x.
std::vector<Vertex> neighbours(const Vertex& x, int q);

/// x ∧ y: first common vertex of the chains [x, omega) and [y, omega).
Vertex confluent(const Vertex& x, const Vertex& y);

/// Edge-counting distance.
std::int64_t distance_d(const Vertex& x, const Vertex& y);

/// Horocyclic Gromov distance, with rho(x, x) = 0.
double gromov_rho(const Vertex& x, const Vertex& y);

/// True iff x lies in the sector U_v.
bool in_sector(const Vertex& v, const Vertex& x);

/// True iff x lies in U_v minus {v}.
inline bool in_punctured_sector(const Vertex& v, const Vertex& x) { return x != v && in_sector(v, x); }

/// B_d(v, n): all vertices within edge distance n, in breadth-first order.
std::vector<Vertex> edge_ball(const Vertex& v, int n, int q);

/// U_v ∩ H_{<v>+n}, exactly q^n vertices in lexicographic order.
std::vector<Vertex> sector_level_slice(const Vertex& v, int n, int q);

/// An element of the dyadic family: a sector U_v or a singleton {v}.
struct DyadicSet {
  enum class Kind { Sector, Singleton };
  Kind kind = Kind::Singleton;
  Vertex v;

  static DyadicSet sector(Vertex g) { return {Kind::Sector, std::move(g)}; }
  static DyadicSet singleton(Vertex x) { return {Kind::Singleton, std::move(x)}; }

  bool is_sector() const { return kind == Kind::Sector; }
  bool contains(const Vertex& x) const { return is_sector() ? in_sector(v, x) : x == v; }
  /// True iff this set is a subset of `other`.
  bool subset_of(const DyadicSet& other) const;

  /// `U(0:1)` or `{0:1}`.
  std::string to_string() const;

  friend bool operator==(const DyadicSet&, const DyadicSet&) = default;
  friend auto operator<=>(const DyadicSet& a, const DyadicSet& b) {
    if (auto c = a.v <=> b.v; c != 0) return c;
    return a.kind <=> b.kind;
  }
};

/// The unique cell of D_k containing x.
DyadicSet dyadic_cell(const Vertex& x, std::int64_t k);

}  // namespace hbt
