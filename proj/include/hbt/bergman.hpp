#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "hbt/functions.hpp"
#include "hbt/measure.hpp"

namespace hbt {

/// n-independent factors of the inner-product coefficients:
///   b(n)  = q^{-alpha n} C,   bp(n) = q^{-alpha n} Cp,
///   d(n, k) = (sum_{j=0}^n q^{-j}) / b(k - n - 1).
/// C and Cp are the geometric-series regroupings of
///   b(0)  = sum_l q^{-alpha(l+1)} (sum_{i<=l} q^{-i}) (sum_{j<=l} q^j),
///   bp(0) = same with the last sum stopping at l-1.
struct Coefficients {
  int q = 2;
  double alpha = 2.0;
  double C = 0.0;
  double Cp = 0.0;

  static Coefficients compute(const Params& p);

  double b(std::int64_t n) const;
  double bp(std::int64_t n) const;
  double d(std::int64_t n, std::int64_t k) const;
};

/// Orthonormal zero-sum system on q points (Helmert contrasts):
/// vector j (1-based) has 1/sqrt(j(j+1)) at i < j, -j/sqrt(j(j+1)) at i = j.
std::vector<std::vector<double>> helmert_basis(int q);

/// Identifies g_{v,j}, j in 1..q-1.
struct BasisIndex {
  Vertex v;
  int j = 1;
  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

/// A finite combination sum c_i ĝ_i of normalized basis functions.
struct HarmonicCombo {
  std::map<BasisIndex, double> terms;
};

/// Euclidean pairing of coefficient vectors (the basis is orthonormal).
double inner_product(const HarmonicCombo& f, const HarmonicCombo& g);

struct SeriesValue {
  double partial;
  double tail_bound;
};

/// Basis, kernels and reproducing machinery of the weighted harmonic
/// Bergman space for fixed (q, alpha).
class Bergman {
 public:
  explicit Bergman(const Params& p);

  const Params& params() const { return measure_.params(); }
  const Measure& measure() const { return measure_; }
  const Coefficients& coefficients() const { return coeff_; }
  int q() const { return measure_.q(); }

  double helmert(int j, int i) const { return helmert_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)]; }

  /// g_{v,j}(x), unnormalized.
  double eval_basis(const BasisIndex& idx, const Vertex& x) const;
  /// ĝ_{v,j}(x) = g_{v,j}(x) / sqrt(b(<v>)).
  double eval_normalized(const BasisIndex& idx, const Vertex& x) const;
  /// ||g_{v,j}||^2 = b(<v>).
  double norm_basis(const BasisIndex& idx) const;

  double eval(const HarmonicCombo& f, const Vertex& x) const;
  VertexFn as_fn(const HarmonicCombo& f) const;

  /// <f, g^H_{<y>}> for zero-sum values `gvals` on S(y) in successor order.
  double inner_product_sp(const VertexFn& f, const Vertex& y, const std::vector<double>& gvals) const;

  /// Gamma_u(s, t): reproducing kernel of the zero-sum space on S(u).
  double gamma(const Vertex& u, const Vertex& s, const Vertex& t) const;
  /// Gamma_u(s, .) restricted to S(u), in successor order.
  std::vector<double> gamma_row(const Vertex& u, const Vertex& s) const;
  /// Gamma^H_{n,v}(x), the extension of Gamma_{p^{n+1}(v)}(p^n(v), .).
  double gamma_ext(std::int64_t n, const Vertex& v, const Vertex& x) const;

  /// b(<p^{n+1}v>) (f(p^n v) - (q+1)/q f(p^{n+1} v) + f(p^{n+2} v)/q).
  double gamma_ext_pairing(const VertexFn& f, const Vertex& v, std::int64_t n) const;

  /// K_alpha(v, x), closed form.
  double kernel(const Vertex& v, const Vertex& x) const;

  /// sum_{n=0}^N d(n, <v>) Gamma^H_{n,v}(x) with a certified remainder bound
  /// (geometric tail plus a floating-point allowance).
  SeriesValue kernel_series(const Vertex& v, const Vertex& x, std::int64_t N) const;

  /// sum_{n=0}^N b(<v>-n)^{-1} sum_j g_{p^n v, j}(v) g_{p^n v, j}(x).
  double basis_expansion_partial(const Vertex& v, const Vertex& x, std::int64_t N) const;

  /// <f, K_{alpha,v}> assembled from the Gamma^H pairings; equals f(v).
  double reproduce(const HarmonicCombo& f, const Vertex& v) const;

  /// sup_x |ĝ_{v,j}(x)|.
  double normalized_sup(const BasisIndex& idx) const;

 private:
  Measure measure_;
  Coefficients coeff_;
  std::vector<std::vector<double>> helmert_;
};

}  // namespace hbt
