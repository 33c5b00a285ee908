#include "hbt/harmonic.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace hbt {

double laplacian_at(const VertexFn& f, const Vertex& x, int q) {
  double s = f(x.predecessor());
  for (int d = 0; d < q; ++d) s += f(x.child(static_cast<Vertex::Digit>(d)));
  return s / (q + 1) - f(x);
}

namespace {

std::set<Vertex> support_with_ring(const FiniteFunction& f, int q) {
  std::set<Vertex> out;
  for (const auto& [x, v] : f.entries()) {
    out.insert(x);
    for (auto& y : neighbours(x, q)) out.insert(std::move(y));
  }
  return out;
}

double local_scale(const VertexFn& f, const Vertex& x, int q) {
  double s = std::abs(f(x));
  for (const auto& y : neighbours(x, q)) s = std::max(s, std::abs(f(y)));
  return s;
}

}  // namespace

FiniteFunction laplacian(const FiniteFunction& f, int q) {
  FiniteFunction out;
  const auto fn = f.as_fn();
  for (const auto& x : support_with_ring(f, q)) out.set(x, laplacian_at(fn, x, q));
  return out;
}

bool is_harmonic_on(const VertexFn& f, const std::vector<Vertex>& region, int q, double tol) {
  for (const auto& x : region)
    if (std::abs(laplacian_at(f, x, q)) > tol * (1.0 + local_scale(f, x, q))) return false;
  return true;
}

LevelSum level_sum(const VertexFn& f, const Vertex& y, int n, int q) {
  if (n < 0) throw std::invalid_argument("level_sum: n must be >= 0");
  double lhs = 0.0;
  for (const auto& x : sector_level_slice(y, n, q)) lhs += f(x);
  const double rhs = geometric_sum(q, 0, n) * f(y) - geometric_sum(q, 0, n - 1) * f(y.predecessor());
  return {lhs, rhs};
}

ExtendedFunction::ExtendedFunction(FiniteFunction base, std::int64_t level, int q)
    : base_(std::move(base)), level_(level), q_(q) {}

double ExtendedFunction::operator()(const Vertex& x) const {
  const auto k = x.level();
  if (k <= level_ + 1) return base_(x);
  const Vertex y = x.ancestor_at_level(level_ + 1);
  const double r = 1.0 / q_;
  const auto top = k - level_ - 1;
  return geometric_sum(r, 0, top) * base_(y) - geometric_sum(r, 1, top) * base_(y.predecessor());
}

VertexFn ExtendedFunction::as_fn() const {
  return [self = *this](const Vertex& x) { return self(x); };
}

std::vector<Vertex> harmonicity_defects(const FiniteFunction& g, std::int64_t n, int q, double tol) {
  std::vector<Vertex> bad;
  const auto fn = g.as_fn();
  for (const auto& x : support_with_ring(g, q))
    if (x.level() <= n && std::abs(laplacian_at(fn, x, q)) > tol * (1.0 + local_scale(fn, x, q)))
      bad.push_back(x);
  return bad;
}

ExtendedFunction harmonic_extension(const FiniteFunction& g, std::int64_t n, int q, double tol) {
  if (auto bad = harmonicity_defects(g, n, q, tol); !bad.empty())
    throw std::invalid_argument("harmonic_extension: g is not harmonic on HB_" + std::to_string(n) +
                                " (first defect at " + bad.front().to_string() + ")");
  return ExtendedFunction(g, n, q);
}

double laplacian_l2_bound(int q, double alpha) {
  const double qd = q;
  return (qd + 2.0) * ((std::pow(qd, 1.0 - alpha) + std::pow(qd, alpha)) / ((qd + 1.0) * (qd + 1.0)) + 1.0);
}

}  // namespace hbt
