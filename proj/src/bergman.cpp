#include "hbt/bergman.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace hbt {

Coefficients Coefficients::compute(const Params& p) {
  p.validate();
  const double q = p.q;
  const double a = p.alpha;
  const double r1 = std::pow(q, 1.0 - a);  // q^{1-alpha}
  const double r0 = std::pow(q, -a);       // q^{-alpha}
  const double rm = std::pow(q, -1.0 - a); // q^{-(1+alpha)}
  const double denom = (1.0 - 1.0 / q) * (q - 1.0);
  Coefficients c;
  c.q = p.q;
  c.alpha = a;
  c.C = (r1 / (1.0 - r1) - 2.0 * r0 / (1.0 - r0) + rm / (1.0 - rm)) / denom;
  c.Cp = (r1 / q / (1.0 - r1) - (1.0 + 1.0 / q) * r0 / (1.0 - r0) + rm / (1.0 - rm)) / denom;
  return c;
}

double Coefficients::b(std::int64_t n) const { return qpow(q, -alpha * static_cast<double>(n)) * C; }
double Coefficients::bp(std::int64_t n) const { return qpow(q, -alpha * static_cast<double>(n)) * Cp; }
double Coefficients::d(std::int64_t n, std::int64_t k) const {
  return geometric_sum(1.0 / q, 0, n) / b(k - n - 1);
}

std::vector<std::vector<double>> helmert_basis(int q) {
  if (q < 2) throw std::invalid_argument("helmert_basis: q must be >= 2");
  std::vector<std::vector<double>> out;
  for (int j = 1; j < q; ++j) {
    const double s = std::sqrt(static_cast<double>(j) * (j + 1));
    std::vector<double> a(static_cast<std::size_t>(q), 0.0);
    for (int i = 0; i < j; ++i) a[static_cast<std::size_t>(i)] = 1.0 / s;
    a[static_cast<std::size_t>(j)] = -static_cast<double>(j) / s;
    out.push_back(std::move(a));
  }
  return out;
}

double inner_product(const HarmonicCombo& f, const HarmonicCombo& g) {
  double s = 0.0;
  for (const auto& [idx, c] : f.terms)
    if (auto it = g.terms.find(idx); it != g.terms.end()) s += c * it->second;
  return s;
}

Bergman::Bergman(const Params& p)
    : measure_(p), coeff_(Coefficients::compute(p)), helmert_(helmert_basis(p.q)) {}

double Bergman::eval_basis(const BasisIndex& idx, const Vertex& x) const {
  if (idx.j < 1 || idx.j >= q()) throw std::invalid_argument("basis index j out of range");
  const auto depth = x.level() - idx.v.level();
  if (depth < 1) return 0.0;
  const Vertex z = x.ancestor(depth - 1);
  if (z.predecessor() != idx.v) return 0.0;
  return geometric_sum(1.0 / q(), 0, depth - 1) * helmert(idx.j, z.digit_from_parent());
}

double Bergman::eval_normalized(const BasisIndex& idx, const Vertex& x) const {
  return eval_basis(idx, x) / std::sqrt(norm_basis(idx));
}

double Bergman::norm_basis(const BasisIndex& idx) const { return coeff_.b(idx.v.level()); }

double Bergman::normalized_sup(const BasisIndex& idx) const {
  double m = 0.0;
  for (double a : helmert_[static_cast<std::size_t>(idx.j - 1)]) m = std::max(m, std::abs(a));
  return m * q() / (q() - 1.0) / std::sqrt(norm_basis(idx));
}

double Bergman::eval(const HarmonicCombo& f, const Vertex& x) const {
  double s = 0.0;
  for (const auto& [idx, c] : f.terms) s += c * eval_normalized(idx, x);
  return s;
}

VertexFn Bergman::as_fn(const HarmonicCombo& f) const {
  return [this, f](const Vertex& x) { return eval(f, x); };
}

double Bergman::inner_product_sp(const VertexFn& f, const Vertex& y, const std::vector<double>& gvals) const {
  if (gvals.size() != static_cast<std::size_t>(q()))
    throw std::invalid_argument("inner_product_sp: expected q values on S(y)");
  double sum = 0.0, mag = 0.0;
  for (double g : gvals) {
    sum += g;
    mag += std::abs(g);
  }
  if (std::abs(sum) > 1e-12 * (1.0 + mag)) throw std::invalid_argument("inner_product_sp: values must sum to 0");
  const double b = coeff_.b(y.level());
  const double bp = coeff_.bp(y.level());
  const double fy = f(y);
  double s = 0.0;
  for (int d = 0; d < q(); ++d) {
    const double g = gvals[static_cast<std::size_t>(d)];
    if (g != 0.0) s += g * (f(y.child(static_cast<Vertex::Digit>(d))) * b - fy * bp);
  }
  return s;
}

double Bergman::gamma(const Vertex& u, const Vertex& s, const Vertex& t) const {
  if (!in_punctured_sector(u, s) || !in_punctured_sector(u, t)) return 0.0;
  const auto lvl = u.level() + 1;
  const double qd = q();
  return s.ancestor_at_level(lvl) == t.ancestor_at_level(lvl) ? (qd - 1.0) / qd : -1.0 / qd;
}

std::vector<double> Bergman::gamma_row(const Vertex& u, const Vertex& s) const {
  std::vector<double> row;
  row.reserve(static_cast<std::size_t>(q()));
  for (int d = 0; d < q(); ++d) row.push_back(gamma(u, s, u.child(static_cast<Vertex::Digit>(d))));
  return row;
}

double Bergman::gamma_ext(std::int64_t n, const Vertex& v, const Vertex& x) const {
  if (n < 0) throw std::invalid_argument("gamma_ext: n must be >= 0");
  const Vertex s = v.ancestor(n);
  const Vertex u = s.predecessor();
  if (!in_punctured_sector(u, x)) return 0.0;
  const double qd = q();
  const double factor = geometric_sum(1.0 / qd, 0, x.level() - s.level());
  return factor * (in_sector(s, x) ? (qd - 1.0) / qd : -1.0 / qd);
}

double Bergman::gamma_ext_pairing(const VertexFn& f, const Vertex& v, std::int64_t n) const {
  const Vertex s = v.ancestor(n);
  const Vertex u = s.predecessor();
  const double qd = q();
  return coeff_.b(u.level()) * (f(s) - (qd + 1.0) / qd * f(u) + f(u.predecessor()) / qd);
}

double Bergman::kernel(const Vertex& v, const Vertex& x) const {
  const Vertex w = confluent(v, x);
  const auto c = w.level();
  const auto a = v.level();
  const auto k = x.level();
  const double qd = q();
  const double al = params().alpha;
  const double C = coeff_.C;
  const double r = 1.0 / qd;

  // Boundary term m = -c-1: the two children of w on the way to v and x.
  double boundary = 0.0;
  if (w != v && w != x)
    boundary = qpow(q(), al * static_cast<double>(c)) / C * geometric_sum(r, 0, a - c - 1) *
               geometric_sum(r, 0, k - c - 1) * (-1.0 / qd);

  // m >= -c: common ancestors, Gamma = (q-1)/q, summed in closed form.
  const double ga = std::pow(qd, -al);
  const double ga1 = std::pow(qd, -al - 1.0);
  const double ga2 = std::pow(qd, -al - 2.0);
  const double dx = qpow(q(), -static_cast<double>(k - c));
  const double dv = qpow(q(), -static_cast<double>(a - c));
  const double bracket = qd * qd / (1.0 - ga) - qd * (dx + dv) / (1.0 - ga1) + dx * dv / (1.0 - ga2);
  const double series = qpow(q(), al * static_cast<double>(c - 1)) / C / (qd * (qd - 1.0)) * bracket;
  return boundary + series;
}

SeriesValue Bergman::kernel_series(const Vertex& v, const Vertex& x, std::int64_t N) const {
  if (N < 0) throw std::invalid_argument("kernel_series: N must be >= 0");
  const auto a = v.level();
  double partial = 0.0, abs_sum = 0.0;
  for (std::int64_t n = 0; n <= N; ++n) {
    const double g = gamma_ext(n, v, x);
    if (g == 0.0) continue;
    const double t = coeff_.d(n, a) * g;
    partial += t;
    abs_sum += std::abs(t);
  }
  const double qd = q();
  const double al = params().alpha;
  const double tail = qd / (qd - 1.0) / coeff_.C * qpow(q(), al * static_cast<double>(a - N - 2)) /
                      (1.0 - std::pow(qd, -al));
  return {partial, tail + 64.0 * DBL_EPSILON * abs_sum};
}

double Bergman::basis_expansion_partial(const Vertex& v, const Vertex& x, std::int64_t N) const {
  double s = 0.0;
  for (std::int64_t n = 0; n <= N; ++n) {
    const Vertex u = v.ancestor(n);
    const double inv_b = 1.0 / coeff_.b(u.level());
    for (int j = 1; j < q(); ++j) {
      const BasisIndex idx{u, j};
      const double gv = eval_basis(idx, v);
      if (gv != 0.0) s += inv_b * gv * eval_basis(idx, x);
    }
  }
  return s;
}

double Bergman::reproduce(const HarmonicCombo& f, const Vertex& v) const {
  if (f.terms.empty()) return 0.0;
  std::int64_t lowest = f.terms.begin()->first.v.level();
  for (const auto& [idx, c] : f.terms) lowest = std::min(lowest, idx.v.level());
  // f vanishes on HB_lowest, so every pairing with n >= <v> - lowest is zero.
  const auto a = v.level();
  const std::int64_t last = std::max<std::int64_t>(0, a - lowest);
  const auto fn = as_fn(f);
  double s = 0.0;
  for (std::int64_t n = 0; n <= last; ++n) {
    const Vertex sv = v.ancestor(n);
    const Vertex u = sv.predecessor();
    s += coeff_.d(n, a) * inner_product_sp(fn, u, gamma_row(u, sv));
  }
  return s;
}

}  // namespace hbt
