#include "hbt/functions.hpp"

#include <cmath>
#include <stdexcept>

namespace hbt {

FiniteFunction::FiniteFunction(const Map& entries) {
  for (const auto& [x, v] : entries) set(x, v);
}

FiniteFunction FiniteFunction::delta(const Vertex& x, double value) {
  FiniteFunction f;
  f.set(x, value);
  return f;
}

double FiniteFunction::operator()(const Vertex& x) const {
  auto it = entries_.find(x);
  return it == entries_.end() ? 0.0 : it->second;
}

void FiniteFunction::set(const Vertex& x, double value) {
  if (value == 0.0)
    entries_.erase(x);
  else
    entries_[x] = value;
}

void FiniteFunction::add(const Vertex& x, double value) { set(x, (*this)(x) + value); }

FiniteFunction FiniteFunction::scaled(double c) const {
  FiniteFunction out;
  for (const auto& [x, v] : entries_) out.set(x, c * v);
  return out;
}

VertexFn FiniteFunction::as_fn() const {
  return [self = *this](const Vertex& x) { return self(x); };
}

double FiniteFunction::lp_integral(const Measure& m, double p) const {
  double s = 0.0;
  for (const auto& [x, v] : entries_) s += std::pow(std::abs(v), p) * m.sigma(x);
  return s;
}

double FiniteFunction::integral(const Measure& m) const {
  double s = 0.0;
  for (const auto& [x, v] : entries_) s += v * m.sigma(x);
  return s;
}

double FiniteFunction::sup_norm() const {
  double s = 0.0;
  for (const auto& [x, v] : entries_) s = std::max(s, std::abs(v));
  return s;
}

Vertex FiniteFunction::hull() const {
  if (entries_.empty()) throw std::invalid_argument("hull of empty support");
  Vertex h = entries_.begin()->first;
  for (const auto& [x, v] : entries_) h = confluent(h, x);
  return h;
}

FiniteFunction operator+(const FiniteFunction& a, const FiniteFunction& b) {
  FiniteFunction out = a;
  for (const auto& [x, v] : b.entries_) out.add(x, v);
  return out;
}

FiniteFunction operator-(const FiniteFunction& a, const FiniteFunction& b) {
  FiniteFunction out = a;
  for (const auto& [x, v] : b.entries_) out.add(x, -v);
  return out;
}

PiecewiseFunction::PiecewiseFunction(const FiniteFunction& f) : overrides_(f.entries()) {}

void PiecewiseFunction::add_piece(const DyadicSet& set, double value) {
  for (const auto& p : pieces_)
    if (set.subset_of(p.set) || p.set.subset_of(set))
      throw std::invalid_argument("PiecewiseFunction: overlapping pieces " + set.to_string() + " and " +
                                  p.set.to_string());
  pieces_.push_back({set, value});
}

double PiecewiseFunction::operator()(const Vertex& x) const {
  if (auto it = overrides_.find(x); it != overrides_.end()) return it->second;
  for (const auto& p : pieces_)
    if (p.set.contains(x)) return p.value;
  return 0.0;
}

double PiecewiseFunction::lp_integral(const Measure& m, double p) const {
  if (p < 1.0) throw std::invalid_argument("lp norm requires p >= 1");
  double s = 0.0;
  for (const auto& [x, v] : overrides_) s += std::pow(std::abs(v), p) * m.sigma(x);
  for (const auto& piece : pieces_) {
    double mass = m.measure(piece.set);
    for (const auto& [x, v] : overrides_)
      if (piece.set.contains(x)) mass -= m.sigma(x);
    s += std::pow(std::abs(piece.value), p) * std::max(mass, 0.0);
  }
  return s;
}

double PiecewiseFunction::lp_norm(const Measure& m, double p) const {
  return std::pow(lp_integral(m, p), 1.0 / p);
}

double PiecewiseFunction::sup_norm() const {
  double s = 0.0;
  for (const auto& [x, v] : overrides_) s = std::max(s, std::abs(v));
  for (const auto& piece : pieces_) {
    // A singleton piece fully masked by its override contributes nothing.
    if (!piece.set.is_sector() && overrides_.contains(piece.set.v)) continue;
    s = std::max(s, std::abs(piece.value));
  }
  return s;
}

double PiecewiseFunction::integral(const Measure& m) const {
  double s = 0.0;
  for (const auto& [x, v] : overrides_) s += v * m.sigma(x);
  for (const auto& piece : pieces_) {
    double mass = m.measure(piece.set);
    for (const auto& [x, v] : overrides_)
      if (piece.set.contains(x)) mass -= m.sigma(x);
    s += piece.value * mass;
  }
  return s;
}

bool PiecewiseFunction::supported_in(const DyadicSet& d) const {
  for (const auto& [x, v] : overrides_)
    if (v != 0.0 && !d.contains(x)) return false;
  for (const auto& piece : pieces_)
    if (piece.value != 0.0 && !piece.set.subset_of(d)) return false;
  return true;
}

VertexFn PiecewiseFunction::as_fn() const {
  return [self = *this](const Vertex& x) { return self(x); };
}

double lp_norm(const PiecewiseFunction& f, const Measure& m, double p) { return f.lp_norm(m, p); }

}  // namespace hbt
