#include "hbt/operators.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "hbt/lumped.hpp"

namespace hbt {

double project_eval(const Bergman& B, const FiniteFunction& f, const Vertex& z) {
  const auto& m = B.measure();
  double s = 0.0;
  for (const auto& [x, v] : f.entries()) s += B.kernel(z, x) * v * m.sigma(x);
  return s;
}

VertexFn projection(const Bergman& B, const FiniteFunction& f) {
  return [&B, f](const Vertex& z) { return project_eval(B, f, z); };
}

double pairing(const Measure& m, const FiniteFunction& f, const FiniteFunction& g) {
  const auto& small = f.size() <= g.size() ? f : g;
  const auto& large = f.size() <= g.size() ? g : f;
  double s = 0.0;
  for (const auto& [x, v] : small.entries())
    if (double w = large(x); w != 0.0) s += v * w * m.sigma(x);
  return s;
}

// ---------------------------------------------------------------------------
// Calderón–Zygmund decomposition

namespace {

// Cells of D_k meeting the given points, with sum |f| sigma over each.
std::map<DyadicSet, double> cell_masses(const Measure& m, const FiniteFunction& f,
                                        const std::vector<Vertex>& points, std::int64_t k) {
  std::map<DyadicSet, double> out;
  for (const auto& x : points) out[dyadic_cell(x, k)] += std::abs(f(x)) * m.sigma(x);
  return out;
}

}  // namespace

CZOutput cz_decompose(const Measure& m, const FiniteFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("cz_decompose: lambda must be > 0");
  if (f.empty()) throw std::invalid_argument("cz_decompose: f is identically zero");

  std::vector<Vertex> points;
  std::int64_t lo = f.entries().begin()->first.level(), hi = lo;
  for (const auto& [x, v] : f.entries()) {
    points.push_back(x);
    lo = std::min(lo, x.level());
    hi = std::max(hi, x.level());
  }

  auto exceeds = [&](const DyadicSet& d, double mass) { return mass / m.measure(d) > lambda; };

  std::int64_t k0 = lo;
  for (;;) {
    bool any = false;
    for (const auto& [d, mass] : cell_masses(m, f, points, k0)) any = any || exceeds(d, mass);
    if (!any) break;
    --k0;
  }

  CZOutput out;
  out.lambda = lambda;
  out.start_level = k0;
  std::vector<Vertex> open = points;
  for (auto k = k0 + 1; k <= hi + 1 && !open.empty(); ++k) {
    for (const auto& [d, mass] : cell_masses(m, f, open, k))
      if (exceeds(d, mass)) out.selected.push_back(d);
    std::erase_if(open, [&](const Vertex& x) {
      return std::any_of(out.selected.begin(), out.selected.end(), [&](const DyadicSet& d) { return d.contains(x); });
    });
  }
  std::sort(out.selected.begin(), out.selected.end());

  for (const auto& x : open) out.good.set_override(x, f(x));
  for (const auto& d : out.selected) {
    double integral = 0.0;
    for (const auto& x : points)
      if (d.contains(x)) integral += f(x) * m.sigma(x);
    const double mean = integral / m.measure(d);
    BadPart bad{d, {}};
    if (d.is_sector()) {
      out.good.add_piece(d, mean);
      for (const auto& x : points)
        if (d.contains(x)) bad.part.set_override(x, f(x) - mean);
      bad.part.add_piece(d, -mean);
    } else {
      // A selected singleton keeps its value in the good part.
      out.good.set_override(d.v, f(d.v));
    }
    out.bad.push_back(std::move(bad));
  }

  const double l1 = f.lp_integral(m, 1.0);
  out.good_constant = out.good.lp_integral(m, 2.0) / (lambda * l1);
  double bad_l1 = 0.0;
  for (const auto& b : out.bad) bad_l1 += b.part.lp_integral(m, 1.0);
  out.bad_constant = bad_l1 / l1;
  return out;
}

// ---------------------------------------------------------------------------
// Hörmander condition

double hormander_pointwise_factor(const Bergman& B) {
  const double q = B.q();
  const double al = B.params().alpha;
  const double ga = std::pow(q, -al);
  const double ga1 = std::pow(q, -al - 1.0);
  const double ga2 = std::pow(q, -al - 2.0);
  // Boundary-term difference plus series difference, each maximised over depths.
  const double boundary = q / ((q - 1.0) * (q - 1.0));
  const double series = ga / (q * (q - 1.0)) * (q / (1.0 - ga1) + 1.0 / (1.0 - ga2));
  return (boundary + series) / B.coefficients().C;
}

namespace {

// sigma({z : <z ∧ v> = c}) = q^{-alpha c} (1 - q^{-alpha}) / (1 - q^{1-alpha}).
double confluent_shell_factor(const Bergman& B) {
  const double q = B.q();
  const double al = B.params().alpha;
  return (1.0 - std::pow(q, -al)) * B.measure().sector_factor();
}

}  // namespace

double hormander_constant(const Bergman& B) {
  return hormander_pointwise_factor(B) * confluent_shell_factor(B) / (B.q() - 1.0);
}

HormanderValue hormander_sum(const Bergman& B, const Vertex& v, const Vertex& x, const Vertex& y, int window) {
  if (!in_sector(v, x) || !in_sector(v, y)) throw std::invalid_argument("hormander_sum: x and y must lie in U_v");
  if (window < 1) throw std::invalid_argument("hormander_sum: window must be >= 1");
  const auto& m = B.measure();
  const int q = B.q();
  const double qd = q;
  const double al = B.params().alpha;
  const auto a = v.level();
  const auto deepest = a + window;

  double lower = 0.0;
  if (x != y) {
    for (auto c = a - window; c <= a - 1; ++c) {
      const Vertex w = v.ancestor_at_level(c);
      const auto toward_v = v.ancestor_at_level(c + 1).digit_from_parent();
      Vertex z = w;
      for (auto k = c; k <= deepest; ++k) {
        double count = 1.0;
        if (k > c) {
          z = (k == c + 1) ? w.child(toward_v == 0 ? Vertex::Digit{1} : Vertex::Digit{0}) : z.child(0);
          count = (qd - 1.0) * std::pow(qd, static_cast<double>(k - c - 1));
        }
        lower += count * std::abs(B.kernel(z, x) - B.kernel(z, y)) * m.sigma_level(k);
      }
    }
  }

  // Remainder: confluent levels below the window (all depths) and depths
  // below the window for the enumerated confluent levels.
  const double M = hormander_pointwise_factor(B);
  const double far = M * confluent_shell_factor(B) * std::pow(qd, -window - 1.0) / (1.0 - 1.0 / qd);
  double deep = 0.0;
  const double depth_tail = std::pow(qd, (1.0 - al) * static_cast<double>(deepest + 1)) * m.sector_factor();
  for (auto c = a - window; c <= a - 1; ++c) {
    const double per_vertex = M * qpow(q, al * static_cast<double>(c)) * qpow(q, static_cast<double>(c - a));
    deep += per_vertex * (qd - 1.0) * qpow(q, -static_cast<double>(c) - 1.0) * depth_tail;
  }
  return {lower, lower + far + deep + 64.0 * DBL_EPSILON * lower};
}

// ---------------------------------------------------------------------------
// Atoms and BMO

AtomReport is_atom(const Measure& m, const PiecewiseFunction& a, double p, const DyadicSet& D, double tol) {
  if (!(p > 1.0)) throw std::invalid_argument("is_atom: p must be > 1");
  AtomReport r;
  r.support_ok = a.supported_in(D);
  if (r.support_ok) r.support_cell = D;
  const double mass = m.measure(D);
  if (std::isinf(p)) {
    r.norm_check = a.sup_norm();
    r.norm_bound = 1.0 / mass;
  } else {
    r.norm_check = a.lp_norm(m, p);
    r.norm_bound = std::pow(mass, 1.0 / p - 1.0);
  }
  r.norm_ok = r.norm_check <= r.norm_bound * (1.0 + tol);
  r.mean = a.integral(m);
  r.mean_ok = std::abs(r.mean) <= tol * (a.lp_integral(m, 1.0) + DBL_MIN);
  r.is_atom = r.support_ok && r.norm_ok && r.mean_ok;
  return r;
}

double oscillation(const Measure& m, const FiniteFunction& f, const DyadicSet& D) {
  const double mass = m.measure(D);
  double integral = 0.0, covered = 0.0;
  for (const auto& [x, v] : f.entries())
    if (D.contains(x)) {
      integral += v * m.sigma(x);
      covered += m.sigma(x);
    }
  const double mean = integral / mass;
  double osc = std::abs(mean) * std::max(mass - covered, 0.0);
  for (const auto& [x, v] : f.entries())
    if (D.contains(x)) osc += std::abs(v - mean) * m.sigma(x);
  return osc / mass;
}

BmoReport bmo_norm(const Measure& m, const FiniteFunction& f, int p_levels) {
  if (p_levels < 1) throw std::invalid_argument("bmo_norm: p_levels must be >= 1");
  BmoReport r;
  r.p_levels = p_levels;
  if (f.empty()) {
    r.note = "f = 0";
    return r;
  }
  const Vertex hull = f.hull();
  r.top_level = hull.level() - p_levels;
  std::set<Vertex> generators;
  for (const auto& [x, v] : f.entries())
    for (auto lvl = x.level(); lvl >= r.top_level; --lvl) generators.insert(x.ancestor_at_level(lvl));
  // Singletons have zero oscillation; sectors without support are constant 0.
  for (const auto& g : generators) {
    const auto cell = DyadicSet::sector(g);
    const double osc = oscillation(m, f, cell);
    if (!r.argmax || osc > r.value) {
      r.value = osc;
      r.argmax = cell;
    }
  }
  r.above_window_bound = 2.0 * f.lp_integral(m, 1.0) / m.sector_measure_level(r.top_level - 1);
  r.note = "cells above level " + std::to_string(r.top_level) + " have oscillation <= " +
           std::to_string(r.above_window_bound) + ", decreasing geometrically";
  return r;
}

// ---------------------------------------------------------------------------
// Weak type (1,1) diagnostic

std::vector<WeakTypeRow> weak_type_curve(const Bergman& B, const FiniteFunction& f,
                                         const std::vector<double>& lambdas, int window) {
  if (window < 0) throw std::invalid_argument("weak_type_curve: window must be >= 0");
  for (double l : lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("weak_type_curve: lambdas must be > 0");
  const auto& m = B.measure();
  std::vector<WeakTypeRow> rows;
  if (f.empty()) {
    for (double l : lambdas) rows.push_back({l, 0.0, 0.0});
    return rows;
  }
  const Vertex hull = f.hull();
  std::int64_t deepest_support = hull.level();
  for (const auto& [x, v] : f.entries()) deepest_support = std::max(deepest_support, x.level());
  const Vertex root = hull.ancestor(window);
  const auto max_level = hull.level() + window;
  const auto frontier = std::min(deepest_support + 1, max_level);
  const LumpedGrid grid(m, root, frontier, max_level);
  const auto values = grid.sample(projection(B, f));
  const double l1 = f.lp_integral(m, 1.0);
  for (double l : lambdas) {
    double mass = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (std::abs(values[i]) > l) mass += grid.points()[i].weight;
    rows.push_back({l, mass, l1 / l});
  }
  return rows;
}

std::vector<WeakTypeRow> weak_type_curve_point_mass(const Bergman& B, const Vertex& v, double c,
                                                    const std::vector<double>& lambdas, int window) {
  if (window < 0) throw std::invalid_argument("weak_type_curve_point_mass: window must be >= 0");
  for (double l : lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("weak_type_curve_point_mass: lambdas must be > 0");
  const auto& m = B.measure();
  const double qd = B.q();
  const auto a = v.level();
  const auto max_level = a + window;
  const double mass_v = m.sigma(v);

  // (representative, multiplicity times sigma)
  std::vector<std::pair<double, double>> classes;
  auto add = [&](const Vertex& z, double count) {
    classes.emplace_back(std::abs(c * B.kernel(z, v) * mass_v), count * m.sigma_level(z.level()));
  };
  for (auto lvl = a - window; lvl <= a; ++lvl) {
    const Vertex w = v.ancestor_at_level(lvl);
    add(w, 1.0);
    if (lvl == a) {
      Vertex z = w;
      for (auto k = a + 1; k <= max_level; ++k) {
        z = z.child(0);
        add(z, std::pow(qd, static_cast<double>(k - a)));
      }
      break;
    }
    const auto toward_v = v.ancestor_at_level(lvl + 1).digit_from_parent();
    Vertex z = w.child(toward_v == 0 ? Vertex::Digit{1} : Vertex::Digit{0});
    for (auto k = lvl + 1; k <= max_level; ++k) {
      if (k > lvl + 1) z = z.child(0);
      add(z, (qd - 1.0) * std::pow(qd, static_cast<double>(k - lvl - 1)));
    }
  }
  const double l1 = std::abs(c) * mass_v;
  std::vector<WeakTypeRow> rows;
  for (double l : lambdas) {
    double mass = 0.0;
    if (c != 0.0)
      for (const auto& [val, weight] : classes)
        if (val > l) mass += weight;
    rows.push_back({l, mass, c != 0.0 ? l1 / l : 0.0});
  }
  return rows;
}

}  // namespace hbt
