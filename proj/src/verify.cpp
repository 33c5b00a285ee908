#include "hbt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hbt/bergman.hpp"
#include "hbt/harmonic.hpp"
#include "hbt/io.hpp"
#include "hbt/lumped.hpp"
#include "hbt/measure.hpp"
#include "hbt/operators.hpp"
#include "hbt/sampler.hpp"

namespace hbt {

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.pass; }));
}

namespace {

std::string fmt(double v) { return format_double(v); }

class Recorder {
 public:
  Recorder(std::vector<CheckRow>& rows, std::string prefix) : rows_(rows), prefix_(std::move(prefix)) {}

  /// |got - expected| <= tol.
  void close(const std::string& id, const std::string& anchor, const std::string& input, double expected, double got,
             double tol) {
    add(id, anchor, input, fmt(expected), fmt(got), fmt(tol), std::abs(got - expected) <= tol);
  }
  void at_most(const std::string& id, const std::string& anchor, const std::string& input, double bound, double got) {
    add(id, anchor, input, "<=" + fmt(bound), fmt(got), "0", got <= bound);
  }
  void at_least(const std::string& id, const std::string& anchor, const std::string& input, double bound, double got) {
    add(id, anchor, input, ">=" + fmt(bound), fmt(got), "0", got >= bound);
  }
  /// A count of violations that must be zero.
  void none(const std::string& id, const std::string& anchor, const std::string& input, std::size_t violations) {
    add(id, anchor, input, "0", std::to_string(violations), "0", violations == 0);
  }
  void holds(const std::string& id, const std::string& anchor, const std::string& input, bool ok,
             const std::string& got = "") {
    add(id, anchor, input, "true", got.empty() ? (ok ? "true" : "false") : got, "0", ok);
  }

 private:
  void add(const std::string& id, const std::string& anchor, const std::string& input, std::string expected,
           std::string got, std::string tol, bool pass) {
    rows_.push_back({prefix_ + "." + id, anchor, input, std::move(expected), std::move(got), std::move(tol), pass});
  }
  std::vector<CheckRow>& rows_;
  std::string prefix_;
};

std::string params_text(const Params& p) { return "q=" + std::to_string(p.q) + ";alpha=" + fmt(p.alpha); }

std::string seed_text(const RunConfig& cfg, const std::string& what) {
  return what + ";seed=" + std::to_string(cfg.seed) + ";" + params_text(cfg.params);
}

// Largest n >= lo with base^n <= cap.
int depth_within(int base, double cap, int lo, int hi) {
  int n = lo;
  while (n < hi && std::pow(base, n + 1) <= cap) ++n;
  return n;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// max(1, sum |c| sup|ĝ|): rounding in the pairings is relative to this.
double combo_scale(const Bergman& B, const HarmonicCombo& f) {
  double s = 0.0;
  for (const auto& [idx, c] : f.terms) s += std::abs(c) * B.normalized_sup(idx);
  return std::max(1.0, s);
}

// ---------------------------------------------------------------------------

void geometry_suite(const RunConfig& cfg, Recorder& r) {
  const int q = cfg.params.q;
  Sampler smp(q, cfg.seed);
  auto V = [q](const char* s) { return Vertex::parse(s, q); };

  r.holds("predecessor.examples", "p(x) is the neighbour one horocycle up", "0:1;0:;-2:10",
          V("0:1").predecessor() == V("0:") && V("0:").predecessor() == V("-1:") &&
              V("-2:10").predecessor() == V("-2:1"));
  const auto s0 = successors(V("0:"), q);
  r.holds("successors.geodesic", "S(r_0) = {r_1} plus off-geodesic children", "0:",
          s0.size() == static_cast<std::size_t>(q) && s0[0] == V("1:") && s0[1] == V("0:1"));
  r.holds("confluent.examples", "x ∧ y", "0:10,0:11;0:1,1:;3:,-1:",
          confluent(V("0:10"), V("0:11")) == V("0:1") && confluent(V("0:1"), V("1:")) == V("0:") &&
              confluent(V("3:"), V("-1:")) == V("-1:"));
  r.close("distance.example", "d(x,y) via the confluent", "0:1,1:", 2, static_cast<double>(distance_d(V("0:1"), V("1:"))), 0);
  r.close("rho.example", "rho(x,y) = e^{-<x∧y>}", "0:1,1:", 1.0, gromov_rho(V("0:1"), V("1:")), 1e-15);
  r.close("rho.diagonal", "rho(x,x) = 0", "0:1", 0.0, gromov_rho(V("0:1"), V("0:1")), 0);

  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto x = smp.vertex(20, 8);
    if (Vertex::parse(x.to_string(), q) != x) ++bad;
    const auto kids = successors(x, q);
    if (kids.size() != static_cast<std::size_t>(q)) ++bad;
    for (const auto& c : kids)
      if (c.predecessor() != x || c.level() != x.level() + 1) ++bad;
  }
  r.none("canonical.roundtrip", "p(child) = x and text round trip", seed_text(cfg, "10000 vertices"), bad);

  bad = 0;
  double worst_ultra = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto x = smp.vertex(4, 5), y = smp.vertex(4, 5), z = smp.vertex(4, 5);
    const auto c = confluent(x, y);
    if (c != confluent(y, x) || confluent(x, x) != x) ++bad;
    if (c.level() > std::min(x.level(), y.level())) ++bad;
    const bool on_chain = x.level() <= y.level() && y.ancestor_at_level(x.level()) == x;
    if ((c == x) != on_chain) ++bad;
    if (confluent(confluent(x, y), z) != confluent(x, confluent(y, z))) ++bad;
    if (distance_d(x, y) != distance_d(y, x) || distance_d(x, z) > distance_d(x, y) + distance_d(y, z)) ++bad;
    if (x != y && y != z && x != z)
      worst_ultra = std::max(worst_ultra, gromov_rho(x, z) / std::max(gromov_rho(x, y), gromov_rho(y, z)));
  }
  r.none("confluent.laws", "symmetry, level bound, chain criterion, associativity", seed_text(cfg, "2000 triples"), bad);
  r.at_most("rho.ultrametric", "rho(x,z) <= max(rho(x,y), rho(y,z))", seed_text(cfg, "2000 triples"), 1.0 + 1e-15,
            worst_ultra);

  const int n_slice = depth_within(q, 4096, 1, 12);
  r.close("slice.size", "#(U_v ∩ H_{<v>+n}) = q^n", "v=0:1;n=" + std::to_string(n_slice), std::pow(q, n_slice),
          static_cast<double>(sector_level_slice(V("0:1"), n_slice, q).size()), 0);

  // Partition of a finite ball by D_k, refinement of D_k by D_{k+1}.
  int radius = 1;
  while (radius < 7 && edge_ball(V("0:"), radius + 1, q).size() <= 600) ++radius;
  const auto pool = edge_ball(V("0:"), radius, q);
  bad = 0;
  for (std::int64_t k = -3; k <= 3; ++k) {
    std::set<DyadicSet> cells;
    for (const auto& y : pool) {
      const auto cell = dyadic_cell(y, k);
      if (!cell.contains(y) || !cell.subset_of(dyadic_cell(y, k - 1))) ++bad;
      cells.insert(cell);
    }
    for (const auto& y : pool)
      if (std::count_if(cells.begin(), cells.end(), [&](const DyadicSet& c) { return c.contains(y); }) != 1) ++bad;
  }
  r.none("dyadic.partition", "D_k partitions X and refines D_{k-1}", "ball(0:," + std::to_string(radius) + ");k=-3..3", bad);

  // Digit relabelling automorphisms fixing omega and r_0.
  std::mt19937_64 rng(cfg.seed);
  bad = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<int> pi(q), pi1(q);
    std::iota(pi.begin(), pi.end(), 0);
    std::iota(pi1.begin(), pi1.end(), 0);
    std::shuffle(pi.begin(), pi.end(), rng);
    std::shuffle(pi1.begin() + 1, pi1.end(), rng);
    auto relabel = [&](const Vertex& x) {
      auto w = x.word();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<Vertex::Digit>(i == 0 ? pi1[w[i]] : pi[w[i]]);
      return Vertex(x.anchor(), w);
    };
    for (int i = 0; i < 100; ++i) {
      const auto x = smp.vertex(3, 4), y = smp.vertex(3, 4);
      const auto X = relabel(x), Y = relabel(y);
      if (distance_d(X, Y) != distance_d(x, y) || gromov_rho(X, Y) != gromov_rho(x, y) ||
          relabel(confluent(x, y)) != confluent(X, Y) || in_sector(x, y) != in_sector(X, Y))
        ++bad;
    }
  }
  r.none("relabel.invariance", "geometry is invariant under digit relabelling", seed_text(cfg, "20 relabellings x 100 pairs"), bad);
}

// ---------------------------------------------------------------------------

void measure_suite(const RunConfig& cfg, Recorder& r) {
  const Measure m(cfg.params);
  const int q = cfg.params.q;
  const double a = cfg.params.alpha;
  Sampler smp(q, cfg.seed);
  const std::string pt = params_text(cfg.params);

  for (int k : {-1, 0, 1})
    r.close("sigma.level" + std::to_string(k), "sigma(x) = q^{-alpha <x>}", pt + ";<x>=" + std::to_string(k),
            std::pow(q, -a * k), m.sigma_level(k), 1e-15 * std::pow(q, -a * k));

  double worst = 0.0;
  for (std::int64_t k = -3; k <= 3; ++k) {
    double partial = 0.0;
    for (int i = 0; i <= 60; ++i) partial += std::pow(q, i) * std::pow(q, -a * static_cast<double>(k + i));
    const double exact = m.sector_measure_level(k);
    const double tail = m.sigma_level(k) * std::pow(q, (1.0 - a) * 61) / (1.0 - std::pow(q, 1.0 - a));
    worst = std::max(worst, (std::abs(exact - partial) - tail) / exact);
  }
  r.at_most("sector.series", "sigma(U_v) closed form vs level series (depth 60, minus its tail)", pt + ";<v>=-3..3",
            1e-12, worst);
  r.close("sector.ratio", "sigma(U_v)/sigma(v) = 1/(1-q^{1-alpha})", pt, 1.0 / (1.0 - std::pow(q, 1.0 - a)),
          m.sector_measure(Vertex::geodesic(2)) / m.sigma(Vertex::geodesic(2)), 1e-14 * m.sector_factor());

  worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto v = smp.vertex(5, 3);
    double s = m.sigma(v);
    for (const auto& z : successors(v, q)) s += m.sector_measure(z);
    worst = std::max(worst, std::abs(s / m.sector_measure(v) - 1.0));
  }
  r.at_most("sector.additivity", "sigma(U_v) = sigma(v) + sum sigma(U_z)", seed_text(cfg, "200 sectors"), 1e-13, worst);

  std::vector<std::pair<Vertex, double>> sample;
  for (int i = 0; i < 1000; ++i) sample.emplace_back(smp.vertex(4, 4), std::exp(smp.uniform(-6.0, 6.0)));
  r.at_most("doubling.random", "ball(x,2r) <= k_alpha ball(x,r)", seed_text(cfg, "1000 balls"),
            m.doubling_constant() * (1 + 1e-12), m.doubling_ratio_sup(sample));
  const auto x = Vertex(1, {1});
  const double lx = static_cast<double>(x.level());
  r.close("doubling.singleton_to_sector", "extremal ratio 1/(1-q^{1-alpha})", "x=1:1;r=e^{-(<x>+1/2)}",
          m.sector_factor(), m.doubling_ratio_sup({{x, std::exp(-(lx + 0.5))}}), 1e-12 * m.sector_factor());
  r.close("doubling.sector_to_parent", "extremal ratio q^alpha", "x=1:1;r=e^{-(<x>-1/2)}", std::pow(q, a),
          m.doubling_ratio_sup({{x, std::exp(-(lx - 0.5))}}), 1e-12 * std::pow(q, a));
  r.close("doubling.constant", "k_alpha = max{q^alpha, 1/(1-q^{1-alpha})}", pt,
          std::max(std::pow(q, a), 1.0 / (1.0 - std::pow(q, 1.0 - a))), m.doubling_constant(), 0);

  const double n1 = m.sigma_level(-1) + m.sigma_level(0) + q * m.sigma_level(1);
  r.close("counting.n1", "B_d(r_0,1) = {p(v), v, S(v)}", pt, n1, m.counting_ball_measure(Vertex::geodesic(0), 1),
          1e-14 * n1);
  bool rejected = false;
  try {
    m.counting_ball_measure(Vertex::geodesic(0), m.enumeration_limit() + 1);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  r.holds("counting.limit", "radius beyond the enumeration limit is rejected",
          "n=" + std::to_string(m.enumeration_limit() + 1), rejected);

  // Non-doubling witness: v_n in U_y ∩ H_{2n}, y = r_0 offset off the geodesic.
  const int nmax = m.enumeration_limit() / 2;
  const Vertex y(0, {});
  double prev = 0.0, min_growth = INFINITY;
  bool increasing = true;
  for (int n = 1; n <= nmax; ++n) {
    Vertex v = y.child(1);
    while (v.level() < 2 * n) v = v.child(0);
    const double ratio = m.counting_ball_measure(v, 2 * n) / m.counting_ball_measure(v, n);
    if (n > 1) {
      increasing = increasing && ratio > prev;
      min_growth = std::min(min_growth, ratio / prev);
    }
    prev = ratio;
  }
  r.holds("nondoubling.increasing", "counting-ball ratio strictly increasing", pt + ";n=1.." + std::to_string(nmax), increasing);
  r.at_least("nondoubling.growth", "per-step growth >= q^{alpha-1}/2", pt + ";n=1.." + std::to_string(nmax),
             std::pow(q, a - 1.0) / 2.0, min_growth);
}

// ---------------------------------------------------------------------------

// g on HB_{n+1}, harmonic on HB_n: zero-sum seeds carried down to level n+1.
FiniteFunction random_harmonic_seed(Sampler& smp, int q, std::int64_t n) {
  FiniteFunction g;
  const int seeds = smp.uniform_int(1, 3);
  // keep q^{span} small: the seed is written out on every level down to n+1
  const int up = std::min(4, depth_within(q, 5000, 1, 5) - 1);
  for (int s = 0; s < seeds; ++s) {
    auto y = smp.descendant(Vertex::geodesic(n - smp.uniform_int(0, up)), smp.uniform_int(0, 2));
    y = y.ancestor_at_level(std::min(y.level(), n - smp.uniform_int(0, std::min(2, up))));
    FiniteFunction seed;
    const auto vals = smp.zero_sum_values();
    const auto kids = successors(y, q);
    for (int d = 0; d < q; ++d) seed.set(kids[static_cast<std::size_t>(d)], vals[static_cast<std::size_t>(d)]);
    const ExtendedFunction ext(seed, y.level(), q);
    for (auto k = y.level() + 1; k <= n + 1; ++k)
      for (const auto& x : sector_level_slice(y, static_cast<int>(k - y.level()), q)) g.add(x, ext(x));
  }
  return g;
}

void harmonic_suite(const RunConfig& cfg, Recorder& r) {
  const int q = cfg.params.q;
  const double a = cfg.params.alpha;
  const Measure m(cfg.params);
  Sampler smp(q, cfg.seed);

  const VertexFn decay = [q](const Vertex& x) { return std::pow(q, -static_cast<double>(x.level())); };
  const VertexFn lvl = [](const Vertex& x) { return static_cast<double>(x.level()); };
  const VertexFn one = [](const Vertex&) { return 1.0; };
  double w_one = 0.0, w_decay = 0.0, w_lvl = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto x = smp.vertex(6, 5);
    w_one = std::max(w_one, std::abs(laplacian_at(one, x, q)));
    w_decay = std::max(w_decay, std::abs(laplacian_at(decay, x, q)) / decay(x));
    w_lvl = std::max(w_lvl, std::abs(laplacian_at(lvl, x, q) - (q - 1.0) / (q + 1.0)));
  }
  r.at_most("laplacian.constant", "Delta 1 = 0", seed_text(cfg, "200 vertices"), 0.0, w_one);
  r.at_most("laplacian.decay", "Delta q^{-<x>} = 0 (relative)", seed_text(cfg, "200 vertices"), 1e-14, w_decay);
  r.at_most("laplacian.level", "Delta <x> = (q-1)/(q+1)", seed_text(cfg, "200 vertices"), 1e-14, w_lvl);
  const auto ls = level_sum(decay, Vertex::geodesic(0), 1, q);
  r.close("levelsum.example", "level-sum identity for q^{-<x>}", "y=0:;n=1", ls.rhs, ls.lhs, 1e-15 * std::max(1.0, std::abs(ls.rhs)));
  bool threw = false;
  try {
    harmonic_extension(FiniteFunction::delta(Vertex(0, {1})), 1, q);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  r.holds("extension.rejects", "extension requires harmonicity on HB_n", "g=delta(0:1);n=1", threw);

  const int lap_depth = depth_within(q, 3000, 1, 6);
  const int ls_depth = depth_within(q, 3000, 1, 8);
  double w_lap = 0.0, w_ls = 0.0, w_bound = 0.0;
  std::size_t defects = 0;
  for (int t = 0; t < 100; ++t) {
    const std::int64_t n = smp.uniform_int(-3, 3);
    const auto g = random_harmonic_seed(smp, q, n);
    defects += harmonicity_defects(g, n, q, 1e-12).size();
    const auto ext = harmonic_extension(g, n, q);
    const auto f = ext.as_fn();
    const double scale = 1.0 + g.sup_norm();
    const auto root = g.hull();
    for (int k = 0; k <= lap_depth; ++k)
      for (const auto& x : sector_level_slice(root, k, q)) w_lap = std::max(w_lap, std::abs(laplacian_at(f, x, q)) / scale);
    for (int i = 0; i < 3; ++i) {
      const auto y = smp.descendant(root, smp.uniform_int(0, 3));
      for (int j = 0; j <= ls_depth; ++j) {
        const auto s = level_sum(f, y, j, q);
        w_ls = std::max(w_ls, std::abs(s.lhs - s.rhs) / (scale * std::pow(q, j)));
      }
      const auto z = smp.descendant(root, smp.uniform_int(0, 40));
      w_bound = std::max(w_bound, std::abs(ext(z)) / (q / (q - 1.0) * 2.0 * g.sup_norm() + 1e-300));
    }
  }
  const std::string in = seed_text(cfg, "100 extensions");
  r.none("extension.seed_harmonic", "random seeds are harmonic on HB_n", in, defects);
  r.at_most("extension.harmonic", "Delta g^H = 0 within depth " + std::to_string(lap_depth), in, 1e-12, w_lap);
  r.at_most("extension.levelsum", "level-sum identity, n <= " + std::to_string(ls_depth), in, 1e-12, w_ls);
  r.at_most("extension.bounded", "|g^H| <= q/(q-1) sup|g| on deep vertices (scaled by sup over seeds)", in, 1.0, w_bound);

  const double bound = laplacian_l2_bound(q, a);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto f = smp.finite_function(smp.uniform_int(1, 12), 3, 3, 1.0);
    worst = std::max(worst, laplacian(f, q).lp_integral(m, 2) / f.lp_integral(m, 2));
  }
  r.at_most("laplacian.l2_bound", "||Delta f||^2 <= (q+2)((q^{1-alpha}+q^alpha)/(q+1)^2+1) ||f||^2",
            seed_text(cfg, "100 functions"), bound, worst);
}

// ---------------------------------------------------------------------------

int window_radius(int q) { return q == 2 ? 4 : q == 3 ? 3 : q <= 6 ? 2 : 1; }

void orthonormality_suite(const RunConfig& cfg, Recorder& r) {
  const Bergman B(cfg.params);
  const int q = B.q();
  const std::string pt = params_text(cfg.params);

  const int radius = window_radius(q);
  const auto window = edge_ball(Vertex::geodesic(0), radius, q);
  std::vector<BasisIndex> idx;
  for (const auto& v : window)
    for (int j = 1; j < q; ++j) idx.push_back({v, j});
  double worst = 0.0;
  for (const auto& ia : idx) {
    const auto fa = B.as_fn(HarmonicCombo{{{ia, 1.0}}});
    for (const auto& ib : idx) {
      std::vector<double> gv(static_cast<std::size_t>(q));
      for (int i = 0; i < q; ++i) gv[static_cast<std::size_t>(i)] = B.helmert(ib.j, i) / std::sqrt(B.norm_basis(ib));
      const double expect = ia == ib ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(B.inner_product_sp(fa, ib.v, gv) - expect));
    }
  }
  const std::string win = pt + ";window=ball(0:," + std::to_string(radius) + ");functions=" + std::to_string(idx.size());
  r.at_most("gram.closed_form", "<ĝ_a, ĝ_b> = delta_ab via successor pairings", win, 1e-10, worst);

  int rb = radius;
  while (rb > 0 && std::pow(q, 2 * rb + 1) > 20000) --rb;
  const auto bwin = edge_ball(Vertex::geodesic(0), rb, q);
  std::vector<BasisIndex> bidx;
  for (const auto& v : bwin)
    for (int j = 1; j < q; ++j)
      if (bwin.size() == 1 || q <= 6 || j <= 2 || j == q - 1) bidx.push_back({v, j});
  const LumpedGrid grid(B.measure(), Vertex::geodesic(-rb), rb + 1, cfg.params.depth);
  std::vector<std::vector<double>> samples;
  for (const auto& i : bidx) samples.push_back(grid.sample(B.as_fn(HarmonicCombo{{{i, 1.0}}})));
  double excess = -INFINITY;
  for (std::size_t i = 0; i < bidx.size(); ++i)
    for (std::size_t j = 0; j < bidx.size(); ++j) {
      const double tail = B.normalized_sup(bidx[i]) * B.normalized_sup(bidx[j]) * grid.truncated_mass();
      excess = std::max(excess, std::abs(grid.dot(samples[i], samples[j]) - (i == j ? 1.0 : 0.0)) - tail);
    }
  r.at_most("gram.truncated", "truncated Gram within its certified tail",
            pt + ";window=ball(0:," + std::to_string(rb) + ");depth=" + std::to_string(cfg.params.depth) +
                ";functions=" + std::to_string(bidx.size()),
            1e-12, excess);

  const BasisIndex g0{Vertex::geodesic(0), 1};
  const double b0 = B.coefficients().b(0);
  r.close("norm.basis", "||g_{v,j}||^2 = b(<v>)", pt + ";v=0:",
          b0, grid.dot(grid.sample([&](const Vertex& x) { return B.eval_basis(g0, x); }),
                       grid.sample([&](const Vertex& x) { return B.eval_basis(g0, x); })),
          1e-10 * b0 + grid.truncated_mass() * std::pow(B.normalized_sup(g0), 2) * b0);
  std::vector<double> h(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) h[static_cast<std::size_t>(i)] = B.helmert(1, i);
  r.close("sp.example", "<g_{y,1}, g^H_y> = b(<y>)", pt + ";y=0:", b0,
          B.inner_product_sp([&](const Vertex& x) { return B.eval_basis(g0, x); }, Vertex::geodesic(0), h), 1e-14 * b0);
}

// ---------------------------------------------------------------------------

// The symmetric series for the kernel, summed term by term.
double kernel_symmetric_series(const Bergman& B, const Vertex& v, const Vertex& x, std::int64_t M) {
  const int q = B.q();
  const auto c = confluent(v, x).level();
  double s = 0.0;
  for (std::int64_t m = -c - 1; m <= M; ++m) {
    const auto nv = m + v.level(), nx = m + x.level();
    const double coef = geometric_sum(1.0 / q, 0, nv) * geometric_sum(1.0 / q, 0, nx);
    if (coef == 0.0) continue;
    const auto sv = v.ancestor(nv), sx = x.ancestor(nx);
    s += coef / B.coefficients().b(-m - 1) * B.gamma(sv.predecessor(), sv, sx);
  }
  return s;
}

void kernel_suite(const RunConfig& cfg, Recorder& r) {
  const Bergman B(cfg.params);
  const int q = B.q();
  const double a = cfg.params.alpha;
  const auto& c = B.coefficients();
  Sampler smp(q, cfg.seed);
  const std::string pt = params_text(cfg.params);

  double b0 = 0.0, bp0 = 0.0;
  for (int l = 0; l <= 60; ++l) {
    double si = 0.0, sj = 0.0, sjp = 0.0;
    for (int i = 0; i <= l; ++i) si += std::pow(q, -i);
    for (int j = 0; j <= l; ++j) sj += std::pow(q, j);
    for (int j = 0; j <= l - 1; ++j) sjp += std::pow(q, j);
    b0 += std::pow(q, -a * (l + 1)) * si * sj;
    bp0 += std::pow(q, -a * (l + 1)) * si * sjp;
  }
  const double rr = std::pow(q, 1.0 - a);
  const double tail60 = q / ((q - 1.0) * (q - 1.0)) * std::pow(rr, 62) / (1.0 - rr);
  r.close("coeff.C", "C closed form vs defining series (depth 60)", pt, b0, c.C, tail60 + 1e-12 * c.C);
  r.close("coeff.Cp", "Cp closed form vs defining series (depth 60)", pt, bp0, c.Cp, tail60 + 1e-12 * c.Cp);
  r.holds("coeff.order", "b(n) > bp(n) > 0", pt, c.C > c.Cp && c.Cp > 0.0);

  const auto r0 = Vertex::geodesic(0);
  const double diag = B.kernel(r0, r0);
  r.close("kernel.diagonal_series", "K(v,v) closed form vs symmetric series (m <= 80)", pt + ";v=0:",
          kernel_symmetric_series(B, r0, r0, 80 + static_cast<std::int64_t>(60 / a)), diag, 1e-10 * std::max(1.0, diag));

  double w_sym = 0.0, w_series = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto v = smp.vertex(4, 4);
    const auto x = i % 3 == 0 ? smp.descendant(v, smp.uniform_int(0, 4)) : smp.vertex(4, 4);
    const double k = B.kernel(v, x);
    w_sym = std::max(w_sym, rel_err(B.kernel(x, v), k));
    if (i % 10 == 0) {
      const double scale = std::max(1.0, std::abs(k)) * std::pow(q, a * std::max(v.level(), x.level()));
      w_series = std::max(w_series, std::abs(kernel_symmetric_series(B, v, x, 80 + static_cast<std::int64_t>(60 / a)) - k) / scale);
    }
  }
  r.at_most("kernel.symmetry", "K(v,x) = K(x,v)", seed_text(cfg, "1000 pairs"), 1e-10, w_sym);
  r.at_most("kernel.symmetric_series", "closed form vs symmetric series", seed_text(cfg, "100 pairs"), 1e-10, w_series);

  for (int N : {5, 10, 20}) {
    double excess = -INFINITY;
    for (int i = 0; i < 200; ++i) {
      const auto v = smp.vertex(4, 4);
      const auto x = i % 2 ? smp.descendant(v, smp.uniform_int(0, 4)) : smp.vertex(4, 4);
      const auto s = B.kernel_series(v, x, N);
      excess = std::max(excess, std::abs(B.kernel(v, x) - s.partial) - s.tail_bound);
    }
    r.at_most("kernel.two_formula.N" + std::to_string(N), "|K - partial series| <= certified tail",
              seed_text(cfg, "200 pairs;N=" + std::to_string(N)), 0.0, excess);
  }

  double w_diag = 0.0;
  for (int l = -5; l <= 5; ++l) {
    const auto v = smp.descendant(Vertex::geodesic(l - 2), 2);
    w_diag = std::max(w_diag, std::abs(B.kernel(v, v) * std::pow(q, -a * l) / diag - 1.0));
  }
  r.at_most("kernel.diagonal_scaling", "K(v,v) q^{-alpha <v>} independent of v", pt + ";<v>=-5..5", 1e-13, w_diag);

  double w_rep = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto f = smp.combo(smp.uniform_int(1, 6), 3, 3);
    for (int k = 0; k < 10; ++k) {
      const auto v = k % 2 ? smp.descendant(f.terms.begin()->first.v, smp.uniform_int(0, 4)) : smp.vertex(4, 4);
      w_rep = std::max(w_rep, std::abs(B.reproduce(f, v) - B.eval(f, v)) / combo_scale(B, f));
    }
  }
  r.at_most("kernel.reproducing", "<f, K_v> = f(v) (relative to max(1, sup|f|))", seed_text(cfg, "200 combos x 10 vertices"), 1e-9, w_rep);

  double w_exp = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto v = smp.vertex(3, 3);
    const auto x = i % 2 ? smp.descendant(v, smp.uniform_int(0, 3)) : smp.vertex(3, 3);
    const double k = B.kernel(v, x);
    w_exp = std::max(w_exp, std::abs(B.basis_expansion_partial(v, x, 60) - k) /
                                (std::max(1.0, std::abs(k)) * std::pow(q, a * v.level())));
  }
  r.at_most("kernel.basis_expansion", "basis expansion (N=60) approaches K", seed_text(cfg, "50 pairs"), 1e-9, w_exp);

  double w_sp2 = 0.0, w_gamma = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto f = smp.combo(smp.uniform_int(1, 4), 2, 2);
    const auto fn = B.as_fn(f);
    const auto v = smp.vertex(3, 3);
    for (int n = 0; n <= 3; ++n) {
      const auto s = v.ancestor(n), u = s.predecessor();
      w_sp2 = std::max(w_sp2, std::abs(B.inner_product_sp(fn, u, B.gamma_row(u, s)) - B.gamma_ext_pairing(fn, v, n)));
      w_gamma = std::max(w_gamma, std::abs(B.gamma_ext(n, v, smp.vertex(4, 5))));
    }
  }
  r.at_most("gamma.pairing", "<f, Gamma^H_{n,v}> second-difference identity", seed_text(cfg, "50 combos"), 1e-12, w_sp2);
  r.at_most("gamma.bounded", "|Gamma^H| <= 1", seed_text(cfg, "200 values"), 1.0, w_gamma);
}

// ---------------------------------------------------------------------------

void projection_suite(const RunConfig& cfg, Recorder& r) {
  const Bergman B(cfg.params);
  const auto& m = B.measure();
  const int q = B.q();
  Sampler smp(q, cfg.seed);
  const auto r0 = Vertex::geodesic(0);

  r.close("project.delta", "P delta_v(v) = K(v,v) sigma(v)", params_text(cfg.params) + ";v=0:", B.kernel(r0, r0),
          project_eval(B, FiniteFunction::delta(r0), r0), 1e-15 * B.kernel(r0, r0));

  double w_adj = 0.0, w_harm = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto f = smp.finite_function(smp.uniform_int(1, 6), 3, 3, 1.0);
    const auto g = smp.finite_function(smp.uniform_int(1, 6), 3, 3, 1.0);
    FiniteFunction pf, pg;
    for (const auto& [x, v] : g.entries()) pf.set(x, project_eval(B, f, x));
    for (const auto& [x, v] : f.entries()) pg.set(x, project_eval(B, g, x));
    w_adj = std::max(w_adj, rel_err(pairing(m, pf, g), pairing(m, f, pg)));
    const auto P = projection(B, f);
    for (int k = 0; k < 5; ++k) {
      const auto z = smp.vertex(4, 4);
      double scale = std::abs(P(z));
      for (const auto& y : neighbours(z, q)) scale = std::max(scale, std::abs(P(y)));
      w_harm = std::max(w_harm, std::abs(laplacian_at(P, z, q)) / std::max(1.0, scale));
    }
  }
  r.at_most("project.self_adjoint", "<Pf, g> = <f, Pg>", seed_text(cfg, "100 pairs"), 1e-9, w_adj);
  r.at_most("project.harmonic", "Delta Pf = 0", seed_text(cfg, "100 functions x 5 vertices"), 1e-12, w_harm);

  double w_idem = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto h = smp.combo(smp.uniform_int(1, 5), 3, 3);
    for (int k = 0; k < 5; ++k) {
      const auto z = smp.vertex(4, 4);
      w_idem = std::max(w_idem, std::abs(B.reproduce(h, z) - B.eval(h, z)) / combo_scale(B, h));
    }
  }
  r.at_most("project.idempotent", "P h = h on basis combinations (relative to max(1, sup|h|))", seed_text(cfg, "20 combos"), 1e-9, w_idem);

  std::vector<double> lambdas;
  for (int i = -12; i <= 4; ++i) lambdas.push_back(std::ldexp(1.0, i));
  const auto delta = FiniteFunction::delta(r0);
  const int wx = std::max(1, depth_within(q, 2e5, 1, 5) - 1);
  const auto generic = weak_type_curve(B, delta, lambdas, wx);
  const auto classes = weak_type_curve_point_mass(B, r0, 1.0, lambdas, wx);
  double w_cls = 0.0;
  for (std::size_t k = 0; k < generic.size(); ++k) w_cls = std::max(w_cls, rel_err(classes[k].mass, generic[k].mass));
  r.at_most("weak11.classes", "class sums equal the vertex-by-vertex window sum",
            params_text(cfg.params) + ";f=delta(0:);W=" + std::to_string(wx), 1e-12, w_cls);

  std::vector<double> ratios;
  bool monotone_lambda = true;
  for (int W = 4; W <= 10; ++W) {
    const auto rows = weak_type_curve_point_mass(B, r0, 1.0, lambdas, W);
    double mx = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      mx = std::max(mx, rows[k].ratio());
      if (k > 0 && rows[k].mass > rows[k - 1].mass) monotone_lambda = false;
    }
    ratios.push_back(mx);
  }
  const std::string in = params_text(cfg.params) + ";f=delta(0:);W=4..10";
  r.holds("weak11.mass_monotone", "superlevel mass non-increasing in lambda", in, monotone_lambda);
  bool nondecreasing = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) nondecreasing = nondecreasing && ratios[i] >= ratios[i - 1] - 1e-12;
  r.holds("weak11.window_monotone", "max mass/bound ratio non-decreasing in the window", in, nondecreasing,
          fmt(ratios.front()) + ".." + fmt(ratios.back()));
  r.at_most("weak11.window_stable", "relative change of the max ratio over the last window step", in, 0.02,
            std::abs(ratios.back() / ratios[ratios.size() - 2] - 1.0));
}

// ---------------------------------------------------------------------------

struct CzBatch {
  std::size_t violations = 0;
  double worst_mean = 0.0;
  double good = 0.0;
  double bad = 0.0;
};

CzBatch cz_batch(const Measure& m, std::uint64_t seed) {
  const int q = m.q();
  Sampler smp(q, seed);
  CzBatch b;
  for (int i = 0; i < 100; ++i) {
    const auto f = smp.finite_function(smp.uniform_int(1, 10), 3, 4, 10.0);
    // 1/lambda uniform on [1, k_alpha^2] / max|f|, so most draws select cells
    const double k = m.doubling_constant();
    const double lambda = f.sup_norm() / (1.0 + (k * k - 1.0) * smp.uniform(0.0, 1.0));
    const auto out = cz_decompose(m, f, lambda);
    for (std::size_t s = 0; s < out.selected.size(); ++s)
      for (std::size_t t = 0; t < out.selected.size(); ++t)
        if (s != t && out.selected[s].subset_of(out.selected[t])) ++b.violations;
    for (const auto& [x, v] : f.entries()) {
      const bool covered = std::any_of(out.selected.begin(), out.selected.end(), [&](const DyadicSet& d) { return d.contains(x); });
      if (!covered && std::abs(v) > lambda) ++b.violations;
    }
    std::vector<Vertex> probes;
    for (const auto& [x, v] : f.entries()) {
      probes.push_back(x);
      for (auto& y : neighbours(x, q)) probes.push_back(std::move(y));
      probes.push_back(smp.descendant(x, 5));
    }
    for (const auto& d : out.selected) probes.push_back(smp.descendant(d.v, 7));
    for (const auto& z : probes) {
      double s = out.good(z);
      for (const auto& bp : out.bad) s += bp.part(z);
      if (std::abs(s - f(z)) > 1e-12 * std::max(1.0, std::abs(f(z)))) ++b.violations;
    }
    for (const auto& bp : out.bad) {
      if (!bp.part.supported_in(bp.cell)) ++b.violations;
      b.worst_mean = std::max(b.worst_mean, std::abs(bp.part.integral(m)) / std::max(1.0, bp.part.lp_integral(m, 1)));
    }
    b.good = std::max(b.good, out.good_constant);
    b.bad = std::max(b.bad, out.bad_constant);
  }
  return b;
}

void cz_suite(const RunConfig& cfg, Recorder& r) {
  {
    const Measure m(Params::make(2, 2.0));
    const auto x = Vertex(0, {1});
    const auto out = cz_decompose(m, FiniteFunction::delta(x, 16.0), 1.0);
    const bool cell_ok = out.selected.size() == 1 && out.selected[0] == DyadicSet::sector(Vertex::geodesic(0));
    r.holds("example.selected", "selected cell is U_{p(x)}", "q=2;alpha=2;f=16 delta(0:1);lambda=1", cell_ok,
            out.selected.empty() ? "none" : out.selected[0].to_string());
    r.close("example.good", "good = f_D on the selected cell", "q=2;alpha=2;f=16 delta(0:1);lambda=1", 2.0,
            out.good(Vertex(0, {1, 1})), 0);
    r.close("example.bad_mean", "bad part has mean zero", "q=2;alpha=2;f=16 delta(0:1);lambda=1", 0.0,
            out.bad.empty() ? NAN : out.bad[0].part.integral(m), 0);
  }
  const Measure m(cfg.params);
  const auto b1 = cz_batch(m, cfg.seed);
  const auto b2 = cz_batch(m, cfg.seed + 1);
  const std::string in = seed_text(cfg, "100 (f,lambda)");
  r.none("random.exact", "maximal disjoint cells, |f| <= lambda off cells, f = good + sum bad, bad supported in cell", in,
         b1.violations + b2.violations);
  r.at_most("random.bad_mean", "sum_D bad sigma = 0", in, 1e-12, std::max(b1.worst_mean, b2.worst_mean));
  r.at_most("random.good_constant", "||good||_2^2 <= c lambda ||f||_1 with c <= k_alpha", in, m.doubling_constant() * (1 + 1e-12),
            std::max(b1.good, b2.good));
  r.at_most("random.bad_constant", "sum ||bad_j||_1 <= c' ||f||_1 with c' <= 2", in, 2.0 + 1e-12, std::max(b1.bad, b2.bad));
  // Half-spread relative to the midpoint: both batches lie within +-10% of it.
  auto spread = [](double u, double w) { return u + w > 0.0 ? std::abs(u - w) / (u + w) : 0.0; };
  r.at_most("random.good_stable", "measured c of both batches within 10% of their midpoint", in + ";batches=seed,seed+1",
            0.10, spread(b1.good, b2.good));
  r.at_most("random.bad_stable", "measured c' of both batches within 10% of their midpoint", in + ";batches=seed,seed+1",
            0.10, spread(b1.bad, b2.bad));
}

// ---------------------------------------------------------------------------

void hormander_suite(const RunConfig& cfg, Recorder& r) {
  const Bergman B(cfg.params);
  const auto& m = B.measure();
  const int q = B.q();
  const double a = cfg.params.alpha;
  Sampler smp(q, cfg.seed);

  const double M = hormander_pointwise_factor(B);
  double worst = 0.0;
  for (int i = 0; i < 3000; ++i) {
    const auto v = smp.vertex(4, 3);
    const auto x = smp.descendant(v, smp.uniform_int(0, 5)), y = smp.descendant(v, smp.uniform_int(0, 5));
    const int up = smp.uniform_int(1, 6);
    const auto w = v.ancestor(up);
    const int toward = v.ancestor(up - 1).digit_from_parent();
    const auto z = i % 5 == 0 ? w
                              : smp.descendant(w.child(static_cast<Vertex::Digit>((toward + smp.uniform_int(1, q - 1)) % q)),
                                               smp.uniform_int(0, 8));
    const double c = static_cast<double>(w.level());
    worst = std::max(worst, std::abs(B.kernel(z, x) - B.kernel(z, y)) / (M * std::pow(q, a * c + c - static_cast<double>(v.level()))));
  }
  r.at_most("pointwise", "|K(z,x)-K(z,y)| <= M q^{alpha c} q^{c-<v>}", seed_text(cfg, "3000 (v,x,y,z)"), 1.0 + 1e-12, worst);

  const int W = q <= 3 ? 3 : q <= 6 ? 2 : 1;
  double w_enum = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto v = smp.vertex(2, 2);
    const auto x = smp.descendant(v, smp.uniform_int(0, W)), y = smp.descendant(v, smp.uniform_int(0, W));
    double brute = 0.0;
    const auto top = v.ancestor(W);
    for (int k = 0; k <= 2 * W; ++k)
      for (const auto& z : sector_level_slice(top, k, q))
        if (!in_sector(v, z)) brute += std::abs(B.kernel(z, x) - B.kernel(z, y)) * m.sigma(z);
    w_enum = std::max(w_enum, rel_err(hormander_sum(B, v, x, y, W).lower, brute));
  }
  r.at_most("window.enumeration", "window sum equals explicit enumeration", seed_text(cfg, "5 triples;window=" + std::to_string(W)),
            1e-12, w_enum);

  const double H = hormander_constant(B);
  double sup_upper = 0.0;
  std::size_t bad_order = 0, bad_same = 0;
  for (int i = 0; i < 100; ++i) {
    const auto v = smp.descendant(Vertex::geodesic(smp.uniform_int(-4, 4) - 2), 2);
    const auto x = smp.descendant(v, smp.uniform_int(0, 4));
    const auto y = i % 2 ? v.child(0) : smp.descendant(v, smp.uniform_int(0, 4));
    double prev = INFINITY, prev_lower = 0.0;
    for (int w : {2, 4, 8}) {
      const auto h = hormander_sum(B, v, x, y, w);
      if (h.lower > h.upper || h.upper > prev * (1 + 1e-12) || h.lower < prev_lower * (1 - 1e-12)) ++bad_order;
      prev = h.upper;
      prev_lower = h.lower;
    }
    sup_upper = std::max(sup_upper, prev);
    const auto same = hormander_sum(B, v, x, x, 4);
    if (same.lower != 0.0) ++bad_same;
  }
  const std::string in = seed_text(cfg, "100 (v,x,y);<v> in [-4,4]");
  r.at_most("uniform", "sup of upper estimates <= reported constant", in + ";H=" + fmt(H), H, sup_upper);
  r.none("window.order", "lower <= upper; upper non-increasing and lower non-decreasing in the window", in, bad_order);
  r.none("diagonal", "x = y gives lower bound 0", in, bad_same);
}

// ---------------------------------------------------------------------------

void hardy_bmo_suite(const RunConfig& cfg, Recorder& r) {
  const Measure m(cfg.params);
  const int q = cfg.params.q;
  Sampler smp(q, cfg.seed);
  const auto r0 = Vertex::geodesic(0);
  const auto D = DyadicSet::sector(r0);
  const auto kids = successors(r0, q);

  PiecewiseFunction atom;
  const double c = 1.0 / m.measure(D);
  atom.set_override(kids[0], c);
  atom.set_override(kids[1], -c);
  const auto rep = is_atom(m, atom, kInfinity, D);
  r.holds("atom.example", "±sigma(D)^{-1} on two successors is a (1,inf)-atom", "D=U(0:)", rep.is_atom,
          "norm=" + fmt(rep.norm_check) + ";bound=" + fmt(rep.norm_bound) + ";mean=" + fmt(rep.mean));
  PiecewiseFunction big;
  big.set_override(kids[0], 4 * c);
  big.set_override(kids[1], -4 * c);
  r.holds("atom.too_large", "scaled by 4 fails the norm condition", "D=U(0:)", !is_atom(m, big, kInfinity, D).is_atom);

  std::size_t bad_incl = 0;
  double worst_pair = -INFINITY;
  for (int i = 0; i < 50; ++i) {
    const auto v = smp.vertex(3, 3);
    const auto cell = DyadicSet::sector(v);
    const double h = 1.0 / m.measure(cell);
    PiecewiseFunction a;
    const int d1 = smp.uniform_int(0, q - 1);
    const int d2 = (d1 + smp.uniform_int(1, q - 1)) % q;
    a.add_piece(DyadicSet::sector(v.child(static_cast<Vertex::Digit>(d1))), h);
    a.add_piece(DyadicSet::sector(v.child(static_cast<Vertex::Digit>(d2))), -h);
    if (!is_atom(m, a, kInfinity, cell).is_atom) ++bad_incl;
    for (double p : {1.01, 1.5, 2.0, 3.0, 10.0})
      if (!is_atom(m, a, p, cell).is_atom) ++bad_incl;
    const auto f = smp.finite_function(5, 3, 3, 1.0);
    double pair = 0.0;
    for (const auto& [x, val] : f.entries()) pair += a(x) * val * m.sigma(x);
    worst_pair = std::max(worst_pair, std::abs(pair) - oscillation(m, f, cell));
  }
  r.none("atom.inclusion", "(1,inf)-atoms are (1,p)-atoms", seed_text(cfg, "50 atoms;p=1.01,1.5,2,3,10"), bad_incl);
  r.at_most("atom.pairing", "|<a,f>| <= oscillation of f on the cell", seed_text(cfg, "50 atoms"), 1e-12, worst_pair);

  const auto x = Vertex(0, {1});
  const double sx = m.sigma(x), su = m.sector_measure(r0);
  r.close("bmo.delta", "oscillation of delta_x on U_{p(x)}", "x=0:1", 2 * sx * (1 - sx / su) / su,
          oscillation(m, FiniteFunction::delta(x), DyadicSet::sector(r0)), 1e-14 * std::max(1.0, 2 * sx / su));
  r.close("bmo.zero", "bmo(0) = 0", "f=0", 0.0, bmo_norm(m, FiniteFunction{}, 3).value, 0);
  double w_hom = 0.0;
  std::size_t bad_window = 0;
  for (int i = 0; i < 30; ++i) {
    const auto f = smp.finite_function(smp.uniform_int(1, 6), 2, 3, 1.0);
    const auto b = bmo_norm(m, f, 4);
    const double s = smp.uniform(-3.0, 3.0);
    w_hom = std::max(w_hom, std::abs(bmo_norm(m, f.scaled(s), 4).value - std::abs(s) * b.value) / std::max(1e-300, b.value));
    const auto wide = bmo_norm(m, f, 6);
    if (wide.value < b.value || wide.above_window_bound >= b.above_window_bound) ++bad_window;
    if (oscillation(m, f, DyadicSet::sector(f.hull().ancestor(9))) > b.above_window_bound) ++bad_window;
  }
  r.at_most("bmo.homogeneous", "bmo(c f) = |c| bmo(f)", seed_text(cfg, "30 functions"), 1e-12, w_hom);
  r.none("bmo.window", "wider windows never decrease the value; cells above obey the decay bound",
         seed_text(cfg, "30 functions"), bad_window);

  PiecewiseFunction two;
  two.add_piece(D, 2.0);
  r.close("lp.sector", "||2 1_{U_v}||_2^2 = 4 sigma(U_v)", "v=0:;p=2", 4 * m.sector_measure(r0), two.lp_integral(m, 2),
          1e-14 * std::max(1.0, 4 * m.sector_measure(r0)));
}

using SuiteFn = std::function<void(const RunConfig&, Recorder&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"geometry", geometry_suite},   {"measure", measure_suite},       {"harmonic", harmonic_suite},
      {"orthonormality", orthonormality_suite}, {"kernel", kernel_suite}, {"projection", projection_suite},
      {"cz", cz_suite},               {"hormander", hormander_suite},   {"hardy-bmo", hardy_bmo_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    n.push_back("all");
    return n;
  }();
  return names;
}

Report run_suite(const std::string& name, const RunConfig& cfg) {
  cfg.params.validate();
  Report rep;
  rep.suite = name;
  bool found = false;
  for (const auto& [id, fn] : registry())
    if (name == "all" || name == id) {
      Recorder rec(rep.rows, id);
      fn(cfg, rec);
      found = true;
    }
  if (!found) throw std::invalid_argument("unknown suite '" + name + "'");
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const CheckRow& a, const CheckRow& b) { return a.check_id < b.check_id; });
  return rep;
}

void write_report_csv(std::ostream& out, const Report& r) {
  out << "check_id,anchor,input,expected,got,tol,pass\n";
  for (const auto& row : r.rows)
    out << csv_field(row.check_id) << ',' << csv_field(row.anchor) << ',' << csv_field(row.input) << ','
        << csv_field(row.expected) << ',' << csv_field(row.got) << ',' << csv_field(row.tol) << ','
        << (row.pass ? "true" : "false") << '\n';
}

void write_report_json(std::ostream& out, const Report& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["failures"] = r.failures();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows)
    j["checks"].push_back({{"check_id", row.check_id},
                           {"anchor", row.anchor},
                           {"input", row.input},
                           {"expected", row.expected},
                           {"got", row.got},
                           {"tol", row.tol},
                           {"pass", row.pass}});
  out << j.dump(2) << '\n';
}

}  // namespace hbt
