#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hbt/bergman.hpp"
#include "hbt/functions.hpp"

namespace hbt {

/// (P f)(z) = sum_x K(z, x) f(x) sigma(x).
double project_eval(const Bergman& B, const FiniteFunction& f, const Vertex& z);

/// P f as an evaluable function.
VertexFn projection(const Bergman& B, const FiniteFunction& f);

/// sum f g sigma over the common support.
double pairing(const Measure& m, const FiniteFunction& f, const FiniteFunction& g);

struct BadPart {
  DyadicSet cell;
  PiecewiseFunction part;  // (f - f_D) on the cell, zero elsewhere
};

struct CZOutput {
  PiecewiseFunction good;
  std::vector<BadPart> bad;
  std::vector<DyadicSet> selected;
  double lambda = 0.0;
  std::int64_t start_level = 0;  // coarsest level, all cell means <= lambda
  double good_constant = 0.0;    // ||good||_2^2 / (lambda ||f||_1)
  double bad_constant = 0.0;     // sum_j ||bad_j||_1 / ||f||_1
};

/// Dyadic stopping-time decomposition f = good + sum_j bad_j at height lambda.
CZOutput cz_decompose(const Measure& m, const FiniteFunction& f, double lambda);

struct HormanderValue {
  double lower;  // exact sum over the enumerated window
  double upper;  // lower plus a certified bound on the remainder
};

/// Bounds on sum_{z not in U_v} |K(z,x) - K(z,y)| sigma(z) for x, y in U_v.
/// The window covers confluent levels <v>-window .. <v>-1 and depths up to
/// <v>+window; each (confluent level, depth) class is summed with its exact
/// multiplicity since the kernel difference is constant on it.
HormanderValue hormander_sum(const Bergman& B, const Vertex& v, const Vertex& x, const Vertex& y, int window);

/// Per-vertex bound: |K(z,x) - K(z,y)| <= M q^{alpha c} q^{c - <v>}, c = <z ∧ v>.
double hormander_pointwise_factor(const Bergman& B);

/// Uniform bound on the Hörmander sum over all v and x, y in U_v.
double hormander_constant(const Bergman& B);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct AtomReport {
  bool is_atom = false;
  bool support_ok = false;
  bool norm_ok = false;
  bool mean_ok = false;
  std::optional<DyadicSet> support_cell;
  double norm_check = 0.0;  // ||a||_p
  double norm_bound = 0.0;  // sigma(D)^{1/p - 1}
  double mean = 0.0;        // sum_D a sigma
};

/// Checks the three (1,p)-atom conditions on D; p in (1, inf].
AtomReport is_atom(const Measure& m, const PiecewiseFunction& a, double p, const DyadicSet& D, double tol = 1e-9);

/// (1/sigma(D)) sum_{x in D} |f(x) - f_D| sigma(x), closed form for finite f.
double oscillation(const Measure& m, const FiniteFunction& f, const DyadicSet& D);

struct BmoReport {
  double value = 0.0;
  std::optional<DyadicSet> argmax;
  int p_levels = 0;
  std::int64_t top_level = 0;  // highest generator level examined
  double above_window_bound = 0.0;
  std::string note;
};

/// Supremum of the oscillation over dyadic cells whose generator lies on a
/// chain from a support point up to p_levels steps above the support hull.
/// Cells further up have oscillation at most 2 ||f||_1 / sigma(D), which is
/// reported as `above_window_bound` and decreases with every step.
BmoReport bmo_norm(const Measure& m, const FiniteFunction& f, int p_levels);

struct WeakTypeRow {
  double lambda;
  double mass;   // sigma({z in window : |P f(z)| > lambda})
  double bound;  // ||f||_1 / lambda
  double ratio() const { return bound > 0.0 ? mass / bound : 0.0; }
};

/// Superlevel masses of P f over the window U_{p^window(h)} ∩ HB_{<h>+window},
/// h the support hull. The window mass underestimates the true mass.
std::vector<WeakTypeRow> weak_type_curve(const Bergman& B, const FiniteFunction& f,
                                         const std::vector<double>& lambdas, int window);

/// weak_type_curve for f = c delta_v, summed over classes of vertices with
/// equal level and equal confluent with v instead of vertex by vertex.
/// P delta_v is constant on each class, so the result is the same; the cost
/// is O(window^2) kernel evaluations for any q.
std::vector<WeakTypeRow> weak_type_curve_point_mass(const Bergman& B, const Vertex& v, double c,
                                                    const std::vector<double>& lambdas, int window);

}  // namespace hbt
