#pragma once

#include <cstdint>
#include <vector>

#include "hbt/functions.hpp"

namespace hbt {

/// Combinatorial Laplacian: mean over the q+1 neighbours minus f(x).
double laplacian_at(const VertexFn& f, const Vertex& x, int q);

/// Delta f for finitely supported f, exact (support grows by one ring).
FiniteFunction laplacian(const FiniteFunction& f, int q);

/// True iff |Delta f(x)| <= tol * (1 + local magnitude) for every x in region.
bool is_harmonic_on(const VertexFn& f, const std::vector<Vertex>& region, int q, double tol);

struct LevelSum {
  double lhs;  // brute-force sum of f over U_y ∩ H_{<y>+n}
  double rhs;  // (sum_{j<=n} q^j) f(y) - (sum_{j<n} q^j) f(p(y))
};

/// Both sides of the level-sum identity for f on the sector U_y.
LevelSum level_sum(const VertexFn& f, const Vertex& y, int n, int q);

/// g^H_n: g on HB_{n+1}, extended harmonically below and constant on the
/// slices U_y ∩ H_k, y in H_{n+1}, k >= n+1.
class ExtendedFunction {
 public:
  ExtendedFunction(FiniteFunction base, std::int64_t level, int q);

  double operator()(const Vertex& x) const;
  VertexFn as_fn() const;

  const FiniteFunction& base() const { return base_; }
  std::int64_t level() const { return level_; }

 private:
  FiniteFunction base_;
  std::int64_t level_;
  int q_;
};

/// Vertices of HB_n where g fails to be harmonic. For finitely supported g
/// this is exact: Delta g can only be nonzero on the support and its ring.
std::vector<Vertex> harmonicity_defects(const FiniteFunction& g, std::int64_t n, int q, double tol);

/// Builds g^H_n; throws std::invalid_argument if g is not harmonic on HB_n.
ExtendedFunction harmonic_extension(const FiniteFunction& g, std::int64_t n, int q, double tol = 1e-12);

/// (q+2) ((q^{1-alpha} + q^alpha) / (q+1)^2 + 1): bound on ||Delta||^2 in L^2_alpha.
double laplacian_l2_bound(int q, double alpha);

}  // namespace hbt
