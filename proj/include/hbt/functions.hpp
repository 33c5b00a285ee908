#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "hbt/measure.hpp"
#include "hbt/tree.hpp"

namespace hbt {

/// Common evaluation interface for every function on the tree.
using VertexFn = std::function<double(const Vertex&)>;

/// A finitely supported real function. Zero values are never stored.
class FiniteFunction {
 public:
  using Map = std::map<Vertex, double>;

  FiniteFunction() = default;
  explicit FiniteFunction(const Map& entries);

  static FiniteFunction delta(const Vertex& x, double value = 1.0);

  double operator()(const Vertex& x) const;
  void set(const Vertex& x, double value);
  void add(const Vertex& x, double value);

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  FiniteFunction scaled(double c) const;
  VertexFn as_fn() const;

  /// Sum |f|^p sigma over the support.
  double lp_integral(const Measure& m, double p) const;
  /// Sum f sigma over the support.
  double integral(const Measure& m) const;
  double sup_norm() const;

  /// The confluent of all support points. Requires a nonempty support.
  Vertex hull() const;

  friend FiniteFunction operator+(const FiniteFunction& a, const FiniteFunction& b);
  friend FiniteFunction operator-(const FiniteFunction& a, const FiniteFunction& b);

 private:
  Map entries_;
};

/// Point overrides on top of constants on pairwise disjoint dyadic sets.
///
/// value(x) = overrides[x] if present, else the constant of the set that
/// contains x, else 0. Override entries may be zero; they mask the constant.
class PiecewiseFunction {
 public:
  struct Piece {
    DyadicSet set;
    double value;
  };

  PiecewiseFunction() = default;
  explicit PiecewiseFunction(const FiniteFunction& f);

  /// Throws std::invalid_argument if `set` overlaps an existing piece.
  void add_piece(const DyadicSet& set, double value);
  void set_override(const Vertex& x, double value) { overrides_[x] = value; }

  double operator()(const Vertex& x) const;

  const std::map<Vertex, double>& overrides() const { return overrides_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Sum |f|^p sigma, closed form; p >= 1.
  double lp_integral(const Measure& m, double p) const;
  /// (Sum |f|^p sigma)^{1/p}; p >= 1.
  double lp_norm(const Measure& m, double p) const;
  double sup_norm() const;
  double integral(const Measure& m) const;

  /// True iff every point where the function can be nonzero lies in `d`.
  bool supported_in(const DyadicSet& d) const;

  VertexFn as_fn() const;

 private:
  std::map<Vertex, double> overrides_;
  std::vector<Piece> pieces_;
};

/// L^p norm of a piecewise function; rejects p < 1.
double lp_norm(const PiecewiseFunction& f, const Measure& m, double p);

}  // namespace hbt
