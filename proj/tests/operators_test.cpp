#include "doctest.h"
#include "hbt/harmonic.hpp"
#include "hbt/operators.hpp"
#include "hbt/sampler.hpp"
#include "oracles.hpp"

using hbt::DyadicSet;
using hbt::FiniteFunction;
using hbt::Params;
using hbt::PiecewiseFunction;
using hbt::Vertex;

namespace {
Vertex V(const char* s, int q = 2) { return Vertex::parse(s, q); }
}  // namespace

TEST_CASE("piecewise norms") {
  const hbt::Measure m(Params{});
  PiecewiseFunction f;
  f.add_piece(DyadicSet::sector(V("0:")), 2.0);
  CHECK(f.lp_integral(m, 2) == doctest::Approx(8.0));
  CHECK(f.lp_norm(m, 2) == doctest::Approx(std::sqrt(8.0)));
  CHECK(hbt::lp_norm(f, m, 1) == doctest::Approx(4.0));
  CHECK_THROWS_AS(hbt::lp_norm(f, m, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(f.add_piece(DyadicSet::sector(V("0:1")), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(f.add_piece(DyadicSet::singleton(V("0:")), 1.0), std::invalid_argument);
  const PiecewiseFunction c(FiniteFunction::delta(V("0:1"), -3.0));
  CHECK(c.lp_integral(m, 1) == doctest::Approx(0.75));
  // override masks a piece
  f.set_override(V("1:"), 0.0);
  CHECK(f(V("1:")) == 0.0);
  CHECK(f(V("2:")) == 2.0);
  CHECK(f.lp_integral(m, 2) == doctest::Approx(8.0 - 4.0 * 0.25));
  CHECK(f.integral(m) == doctest::Approx(4.0 - 0.5));
  // triangle inequality on random pairs
  hbt::Sampler smp(2, 4);
  for (int i = 0; i < 100; ++i) {
    PiecewiseFunction a(smp.finite_function(4, 2, 3, 2.0)), b(smp.finite_function(4, 2, 3, 2.0));
    a.add_piece(DyadicSet::sector(V("3:1")), smp.uniform(-1, 1));
    b.add_piece(DyadicSet::sector(V("3:")), smp.uniform(-1, 1));
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      PiecewiseFunction s;
      // a + b: pieces on a common refinement, overrides wherever either has one
      FiniteFunction pts;
      for (const auto& [x, v] : a.overrides()) pts.set(x, 1.0);
      for (const auto& [x, v] : b.overrides()) pts.set(x, 1.0);
      s.add_piece(DyadicSet::sector(V("3:1")), a(V("3:1")) + b(V("3:1")));
      s.add_piece(DyadicSet::sector(V("4:")), b(V("4:")));
      s.set_override(V("3:"), a(V("3:")) + b(V("3:")));
      for (const auto& [x, v] : pts.entries()) s.set_override(x, a(x) + b(x));
      CHECK(s.lp_norm(m, p) <= a.lp_norm(m, p) + b.lp_norm(m, p) + 1e-12);
    }
  }
}

TEST_CASE("projection") {
  const hbt::Bergman B(Params{});
  CHECK(hbt::project_eval(B, FiniteFunction::delta(V("0:")), V("0:")) == doctest::Approx(0.24));
  CHECK(hbt::project_eval(B, FiniteFunction{}, V("0:")) == 0.0);
  for (int q : {2, 3}) {
    const hbt::Bergman Bq(Params::make(q, q == 2 ? 2.0 : 1.5));
    const auto& m = Bq.measure();
    hbt::Sampler smp(q, 12);
    for (int i = 0; i < 100; ++i) {
      const auto f = smp.finite_function(smp.uniform_int(1, 6), 3, 3, 1.0);
      const auto g = smp.finite_function(smp.uniform_int(1, 6), 3, 3, 1.0);
      FiniteFunction pf, pg;
      for (const auto& [x, v] : g.entries()) pf.set(x, hbt::project_eval(Bq, f, x));
      for (const auto& [x, v] : f.entries()) pg.set(x, hbt::project_eval(Bq, g, x));
      const double lhs = hbt::pairing(m, pf, g), rhs = hbt::pairing(m, f, pg);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
      const auto P = hbt::projection(Bq, f);
      for (int k = 0; k < 5; ++k) {
        const auto z = smp.vertex(4, 4);
        double scale = std::abs(P(z));
        for (const auto& y : hbt::neighbours(z, q)) scale = std::max(scale, std::abs(P(y)));
        CHECK(std::abs(hbt::laplacian_at(P, z, q)) <= 1e-12 * std::max(1.0, scale));
      }
    }
  }
  const hbt::Measure m(Params{});
  CHECK(hbt::pairing(m, FiniteFunction::delta(V("0:1"), 2.0), FiniteFunction::delta(V("0:"), 3.0)) == 0.0);
  auto f = FiniteFunction::delta(V("0:1"), 2.0);
  f.set(V("-1:"), 1.0);
  CHECK(hbt::pairing(m, f, f) == doctest::Approx(f.lp_integral(m, 2)));
}

TEST_CASE("CZ decomposition: point mass") {
  const hbt::Measure m(Params{});
  const auto x = V("0:1");
  const auto f = FiniteFunction::delta(x, 16.0);
  const auto out = hbt::cz_decompose(m, f, 1.0);
  REQUIRE(out.selected.size() == 1);
  CHECK(out.selected[0] == DyadicSet::sector(V("0:")));
  CHECK(out.good(x) == 2.0);
  CHECK(out.good(V("0:")) == 2.0);
  CHECK(out.good(V("0:11")) == 2.0);
  CHECK(out.good(V("-1:")) == 0.0);
  REQUIRE(out.bad.size() == 1);
  const auto& b = out.bad[0].part;
  CHECK(b(x) == 14.0);
  CHECK(b(V("1:")) == -2.0);
  CHECK(b(V("0:")) == -2.0);
  CHECK(b.integral(m) == 0.0);
  CHECK_THROWS_AS(hbt::cz_decompose(m, f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hbt::cz_decompose(m, FiniteFunction{}, 1.0), std::invalid_argument);
}

TEST_CASE("CZ decomposition: nothing selected") {
  const hbt::Measure m(Params{});
  auto f = FiniteFunction::delta(V("0:1"), 0.5);
  f.set(V("2:"), -0.25);
  const auto out = hbt::cz_decompose(m, f, 1.0);
  CHECK(out.selected.empty());
  CHECK(out.bad.empty());
  for (const auto& [x, v] : f.entries()) CHECK(out.good(x) == v);
  CHECK(out.good(V("0:")) == 0.0);
}

TEST_CASE("CZ decomposition: random properties") {
  for (auto [q, a] : std::vector<std::pair<int, double>>{{2, 2.0}, {2, 1.5}, {3, 3.0}}) {
    const hbt::Measure m(Params::make(q, a));
    hbt::Sampler smp(q, 77);
    for (int i = 0; i < 100; ++i) {
      const auto f = smp.finite_function(smp.uniform_int(1, 10), 3, 4, 10.0);
      const double lambda = std::exp(smp.uniform(-3, 3));
      const auto out = hbt::cz_decompose(m, f, lambda);
      // selected cells are disjoint and maximal
      for (std::size_t s = 0; s < out.selected.size(); ++s)
        for (std::size_t t = 0; t < out.selected.size(); ++t)
          if (s != t) {
            CHECK_FALSE(out.selected[s].subset_of(out.selected[t]));
          }
      // i) |f| <= lambda off the selected cells
      for (const auto& [x, v] : f.entries()) {
        bool covered = false;
        for (const auto& d : out.selected) covered = covered || d.contains(x);
        if (!covered) CHECK(std::abs(v) <= lambda);
      }
      // ii) pointwise identity on the support, around it, and deep inside the cells
      std::vector<Vertex> probes;
      for (const auto& [x, v] : f.entries()) {
        probes.push_back(x);
        for (auto& y : hbt::neighbours(x, q)) probes.push_back(y);
        probes.push_back(smp.descendant(x, 5));
      }
      for (const auto& d : out.selected) probes.push_back(smp.descendant(d.v, 7));
      for (const auto& z : probes) {
        double s = out.good(z);
        for (const auto& b : out.bad) s += b.part(z);
        CHECK(s == doctest::Approx(f(z)).epsilon(1e-12).scale(1.0));
      }
      // iv) support and vanishing mean of each bad part
      for (const auto& b : out.bad) {
        CHECK(b.part.supported_in(b.cell));
        CHECK(std::abs(b.part.integral(m)) <= 1e-12 * std::max(1.0, b.part.lp_integral(m, 1)));
      }
      // iii) and iv) constants
      CHECK(out.good_constant <= m.doubling_constant() * (1 + 1e-12));
      CHECK(out.bad_constant <= 2.0 + 1e-12);
    }
  }
}

TEST_CASE("hormander: pointwise bound") {
  for (auto [q, a] : std::vector<std::pair<int, double>>{{2, 1.5}, {2, 3.0}, {3, 2.0}, {5, 1.2}}) {
    const hbt::Bergman B(Params::make(q, a));
    const double M = hbt::hormander_pointwise_factor(B);
    hbt::Sampler smp(q, 3);
    for (int i = 0; i < 3000; ++i) {
      const auto v = smp.vertex(4, 3);
      const auto x = smp.descendant(v, smp.uniform_int(0, 5)), y = smp.descendant(v, smp.uniform_int(0, 5));
      const int up = smp.uniform_int(1, 6);
      const auto w = v.ancestor(up);
      const int toward = v.ancestor(up - 1).digit_from_parent();
      const auto z = i % 5 == 0 ? w : smp.descendant(w.child((toward + smp.uniform_int(1, q - 1)) % q), smp.uniform_int(0, 8));
      const auto c = static_cast<double>(w.level());
      CHECK(std::abs(B.kernel(z, x) - B.kernel(z, y)) <= M * std::pow(q, a * c + c - v.level()) * (1 + 1e-12));
    }
  }
}

TEST_CASE("hormander: window sum against explicit enumeration") {
  const hbt::Bergman B(Params::make(2, 2.0));
  const auto& m = B.measure();
  const int W = 3;
  for (const auto& [v, x, y] : std::vector<std::tuple<Vertex, Vertex, Vertex>>{
           {V("0:"), V("0:"), V("1:")}, {V("0:1"), V("0:11"), V("0:101")}, {V("-2:"), V("0:"), V("-2:1")}}) {
    // every z outside U_v whose confluent with v is within W levels, down to <v> + W
    double brute = 0.0;
    const auto top = v.ancestor(W);
    for (int k = 0; k <= 2 * W; ++k)
      for (const auto& z : hbt::sector_level_slice(top, k, 2))
        if (!hbt::in_sector(v, z)) brute += std::abs(B.kernel(z, x) - B.kernel(z, y)) * m.sigma(z);
    const auto h = hbt::hormander_sum(B, v, x, y, W);
    CHECK(h.lower == doctest::Approx(brute).epsilon(1e-12));
    // a much wider window stays inside the certified bracket
    const auto wide = hbt::hormander_sum(B, v, x, y, 14);
    CHECK(wide.lower >= h.lower);
    CHECK(wide.lower <= h.upper);
    CHECK(wide.upper <= h.upper);
  }
  CHECK_THROWS_AS(hbt::hormander_sum(B, V("0:1"), V("0:"), V("0:1"), 3), std::invalid_argument);
  CHECK_THROWS_AS(hbt::hormander_sum(B, V("0:1"), V("0:1"), V("0:1"), 0), std::invalid_argument);
}

TEST_CASE("hormander: uniform constant") {
  for (auto [q, a] : std::vector<std::pair<int, double>>{{2, 2.0}, {3, 1.5}, {2, 3.0}}) {
    const hbt::Bergman B(Params::make(q, a));
    const double H = hbt::hormander_constant(B);
    hbt::Sampler smp(q, 19);
    for (int i = 0; i < 100; ++i) {
      const auto v = smp.descendant(Vertex::geodesic(smp.uniform_int(-4, 4) - 2), 2);
      const auto x = smp.descendant(v, smp.uniform_int(0, 4));
      const auto y = i % 2 ? v.child(0) : smp.descendant(v, smp.uniform_int(0, 4));
      double prev = INFINITY;
      for (int w : {2, 4, 8}) {
        const auto h = hbt::hormander_sum(B, v, x, y, w);
        CHECK(h.lower <= h.upper);
        CHECK(h.upper <= prev * (1 + 1e-12));
        prev = h.upper;
      }
      CHECK(prev <= H);
      const auto same = hbt::hormander_sum(B, v, x, x, 4);
      CHECK(same.lower == 0.0);
      CHECK(same.upper > 0.0);
    }
  }
}

TEST_CASE("atoms") {
  const hbt::Measure m(Params{});
  const auto D = DyadicSet::sector(V("0:"));
  PiecewiseFunction a;
  a.set_override(V("1:"), 0.5);
  a.set_override(V("0:1"), -0.5);
  // values sit on points of equal measure, so the mean vanishes
  auto r = hbt::is_atom(m, a, hbt::kInfinity, D);
  CHECK(r.is_atom);
  CHECK(r.norm_check == 0.5);
  CHECK(r.norm_bound == 0.5);
  PiecewiseFunction big;
  big.set_override(V("1:"), 2.0);
  big.set_override(V("0:1"), -2.0);
  r = hbt::is_atom(m, big, hbt::kInfinity, D);
  CHECK_FALSE(r.is_atom);
  CHECK_FALSE(r.norm_ok);
  CHECK(r.mean_ok);
  CHECK_FALSE(hbt::is_atom(m, a, 2.0, DyadicSet::sector(V("1:"))).support_ok);
  CHECK_THROWS_AS(hbt::is_atom(m, a, 1.0, D), std::invalid_argument);
  // (1, inf)-atoms are (1, p)-atoms
  hbt::Sampler smp(2, 5);
  for (int i = 0; i < 50; ++i) {
    const auto v = smp.vertex(3, 3);
    const auto cell = DyadicSet::sector(v);
    PiecewiseFunction atom;
    const double c = 1.0 / m.measure(cell);
    atom.add_piece(DyadicSet::sector(v.child(0)), c);
    atom.add_piece(DyadicSet::sector(v.child(1)), -c);
    atom.set_override(v, 0.0);
    REQUIRE(hbt::is_atom(m, atom, hbt::kInfinity, cell).is_atom);
    for (double p : {1.01, 1.5, 2.0, 3.0, 10.0}) CHECK(hbt::is_atom(m, atom, p, cell).is_atom);
    // pairing with finite f is controlled by the oscillation of f on the cell
    const auto f = smp.finite_function(5, 3, 3, 1.0);
    double pair = 0.0;
    for (const auto& [x, val] : f.entries()) pair += atom(x) * val * m.sigma(x);
    CHECK(std::abs(pair) <= hbt::oscillation(m, f, cell) + 1e-12);
  }
}

TEST_CASE("bmo") {
  const hbt::Measure m(Params{});
  CHECK(hbt::bmo_norm(m, FiniteFunction{}, 3).value == 0.0);
  const auto x = V("0:1");
  const auto d = FiniteFunction::delta(x);
  CHECK(hbt::oscillation(m, d, DyadicSet::singleton(x)) == 0.0);
  const double sx = m.sigma(x), su = m.sector_measure(x.predecessor());
  CHECK(hbt::oscillation(m, d, DyadicSet::sector(x.predecessor())) ==
        doctest::Approx(2 * sx * (1 - sx / su) / su).epsilon(1e-14));
  hbt::Sampler smp(2, 7);
  for (int i = 0; i < 30; ++i) {
    const auto f = smp.finite_function(smp.uniform_int(1, 6), 2, 3, 1.0);
    const auto r = hbt::bmo_norm(m, f, 4);
    const double c = smp.uniform(-3, 3);
    CHECK(hbt::bmo_norm(m, f.scaled(c), 4).value == doctest::Approx(std::abs(c) * r.value).epsilon(1e-12));
    CHECK(hbt::bmo_norm(m, f, 6).value >= r.value);
    CHECK(r.above_window_bound > hbt::bmo_norm(m, f, 6).above_window_bound);
    // brute force over all sector cells generated near the support
    double brute = 0.0;
    for (const auto& [y, v] : f.entries())
      for (auto lvl = y.level(); lvl >= r.top_level; --lvl)
        brute = std::max(brute, hbt::oscillation(m, f, DyadicSet::sector(y.ancestor_at_level(lvl))));
    CHECK(r.value == doctest::Approx(brute));
    // every cell far above the window obeys the reported bound
    CHECK(hbt::oscillation(m, f, DyadicSet::sector(f.hull().ancestor(9))) <= r.above_window_bound);
  }
  CHECK_THROWS_AS(hbt::bmo_norm(m, d, 0), std::invalid_argument);
}

TEST_CASE("weak type diagnostic") {
  const hbt::Bergman B(Params{});
  const std::vector<double> lambdas{0.01, 0.05, 0.1, 0.5, 1.0};
  for (const auto& row : hbt::weak_type_curve(B, FiniteFunction{}, lambdas, 4)) CHECK(row.mass == 0.0);
  CHECK_THROWS_AS(hbt::weak_type_curve(B, FiniteFunction::delta(V("0:")), {0.0}, 4), std::invalid_argument);
  hbt::Sampler smp(2, 9);
  for (int i = 0; i < 10; ++i) {
    const auto f = smp.finite_function(smp.uniform_int(1, 4), 2, 2, 1.0);
    double prev_max = 0.0;
    for (int W = 4; W <= 8; ++W) {
      const auto rows = hbt::weak_type_curve(B, f, lambdas, W);
      double mx = 0.0;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k) CHECK(rows[k].mass <= rows[k - 1].mass);
        CHECK(rows[k].bound == doctest::Approx(f.lp_integral(B.measure(), 1) / rows[k].lambda));
        mx = std::max(mx, rows[k].ratio());
      }
      CHECK(mx >= prev_max - 1e-12);
      prev_max = mx;
    }
  }
}

TEST_CASE("weak type: point-mass classes match the vertex sum") {
  const std::vector<double> lambdas{1e-4, 1e-3, 0.01, 0.05, 0.1, 0.5, 1.0, 4.0};
  for (auto [q, a] : std::vector<std::pair<int, double>>{{2, 2.0}, {2, 1.5}, {3, 1.5}, {5, 3.0}}) {
    const hbt::Bergman B(Params::make(q, a));
    hbt::Sampler smp(q, 4);
    for (int i = 0; i < 4; ++i) {
      const auto v = smp.vertex(2, 2);
      const double c = smp.uniform(-3.0, 3.0);
      for (int W = 0; W <= (q == 2 ? 6 : 3); ++W) {
        const auto generic = hbt::weak_type_curve(B, FiniteFunction::delta(v, c), lambdas, W);
        const auto classes = hbt::weak_type_curve_point_mass(B, v, c, lambdas, W);
        REQUIRE(generic.size() == classes.size());
        for (std::size_t k = 0; k < generic.size(); ++k) {
          CHECK(classes[k].mass == doctest::Approx(generic[k].mass).epsilon(1e-12));
          CHECK(classes[k].bound == doctest::Approx(generic[k].bound).epsilon(1e-15));
        }
      }
    }
  }
  const hbt::Bergman B(Params{});
  for (const auto& row : hbt::weak_type_curve_point_mass(B, V("0:"), 0.0, lambdas, 5)) CHECK(row.mass == 0.0);
  CHECK_THROWS_AS(hbt::weak_type_curve_point_mass(B, V("0:"), 1.0, {-1.0}, 5), std::invalid_argument);
  // too many vertices to list one by one
  const hbt::Bergman B36(Params::make(36, 2.0));
  CHECK_THROWS_AS(hbt::weak_type_curve(B36, FiniteFunction::delta(Vertex::geodesic(0)), lambdas, 6), std::invalid_argument);
  CHECK(hbt::weak_type_curve_point_mass(B36, Vertex::geodesic(0), 1.0, lambdas, 10).size() == lambdas.size());
}
