// hbt: command-line access to the tree, measure, kernel and operator
// computations, plus the verification suites.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hbt/bergman.hpp"
#include "hbt/io.hpp"
#include "hbt/operators.hpp"
#include "hbt/verify.hpp"

namespace {

using hbt::Vertex;
using json = nlohmann::ordered_json;

struct Globals {
  hbt::Params params;
  std::uint64_t seed = 0;
  bool json = false;
  std::string output;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Rows of cells, written as CSV or as a JSON array of objects.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<json> cells) { rows_.push_back(std::move(cells)); }
  void write(std::ostream& out, bool as_json) const {
    if (as_json) {
      json arr = json::array();
      for (const auto& r : rows_) {
        json o;
        for (std::size_t i = 0; i < header_.size(); ++i) o[header_[i]] = r[i];
        arr.push_back(o);
      }
      out << arr.dump(2) << '\n';
      return;
    }
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_text(r[i]);
      out << '\n';
    }
  }

 private:
  static std::string cell_text(const json& c) {
    if (c.is_number_float()) return num(c.get<double>());
    if (c.is_string()) return hbt::csv_field(c.get<std::string>());
    if (c.is_null()) return "";
    return c.dump();
  }
  std::vector<std::string> header_;
  std::vector<std::vector<json>> rows_;
};

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_value(Globals& g, const std::string& key, double v) {
  Sink s(g.output);
  if (g.json)
    s.out() << json{{key, v}}.dump() << '\n';
  else
    s.out() << num(v) << '\n';
}

Vertex vtx(const Globals& g, const std::string& text) { return Vertex::parse(text, g.params.q); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

hbt::DyadicSet parse_cell(const Globals& g, const std::string& text) {
  if (text.rfind("point:", 0) == 0) return hbt::DyadicSet::singleton(vtx(g, text.substr(6)));
  if (text.rfind("sector:", 0) == 0) return hbt::DyadicSet::sector(vtx(g, text.substr(7)));
  return hbt::DyadicSet::sector(vtx(g, text));
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return hbt::kInfinity;
  std::size_t used = 0;
  const double p = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad value for --p: '" + s + "'");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic Bergman analysis on homogeneous trees"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--q", g.params.q, "branching parameter q (2..36)")->capture_default_str();
  app.add_option("--alpha", g.params.alpha, "measure exponent alpha > 1")->capture_default_str();
  app.add_option("--tol", g.params.tol, "relative tolerance")->capture_default_str();
  app.add_option("--depth", g.params.depth, "truncation depth for brute-force sums")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized suites")->capture_default_str();
  app.add_flag("--json", g.json, "emit JSON instead of CSV");
  app.add_option("--output", g.output, "write the report to a file");

  int exit_code = 0;

  // suite
  auto* suite = app.add_subcommand("suite", "run a verification suite");
  std::string suite_name;
  suite->add_option("name", suite_name, "suite id")->required()->check(CLI::IsMember(hbt::suite_names()));
  suite->callback([&] {
    const auto rep = hbt::run_suite(suite_name, {g.params, g.seed});
    Sink s(g.output);
    if (g.json)
      hbt::write_report_json(s.out(), rep);
    else
      hbt::write_report_csv(s.out(), rep);
    if (!rep.passed()) {
      std::cerr << rep.failures() << " check(s) failed\n";
      exit_code = 1;
    }
  });

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a single quantity");
  std::string what, ev_v, ev_x, ev_y, ev_f, ev_at;
  int ev_j = 1;
  eval->add_option("what", what, "kernel|basis|sigma|rho|project")
      ->required()
      ->check(CLI::IsMember({"kernel", "basis", "sigma", "rho", "project"}));
  eval->add_option("--v", ev_v, "vertex v");
  eval->add_option("--x", ev_x, "vertex x");
  eval->add_option("--y", ev_y, "vertex y");
  eval->add_option("--j", ev_j, "basis index j");
  eval->add_option("--f", ev_f, "CSV file of a finitely supported function");
  eval->add_option("--at", ev_at, "comma-separated vertices");
  eval->callback([&] {
    auto need = [](const std::string& val, const char* flag) {
      if (val.empty()) throw std::invalid_argument(std::string("missing ") + flag);
      return val;
    };
    g.params.validate();
    if (what == "sigma") {
      emit_value(g, "sigma", hbt::Measure(g.params).sigma(vtx(g, need(ev_x, "--x"))));
    } else if (what == "rho") {
      emit_value(g, "rho", hbt::gromov_rho(vtx(g, need(ev_x, "--x")), vtx(g, need(ev_y, "--y"))));
    } else if (what == "kernel") {
      emit_value(g, "kernel", hbt::Bergman(g.params).kernel(vtx(g, need(ev_v, "--v")), vtx(g, need(ev_x, "--x"))));
    } else if (what == "basis") {
      const hbt::Bergman B(g.params);
      if (ev_j < 1 || ev_j >= g.params.q) throw std::invalid_argument("--j must be in 1..q-1");
      emit_value(g, "basis", B.eval_basis({vtx(g, need(ev_v, "--v")), ev_j}, vtx(g, need(ev_x, "--x"))));
    } else {
      const hbt::Bergman B(g.params);
      const auto f = hbt::read_finite_function_file(need(ev_f, "--f"), g.params.q);
      Table t({"vertex", "value"});
      for (const auto& s : split_list(need(ev_at, "--at"))) t.row({s, hbt::project_eval(B, f, vtx(g, s))});
      Sink sink(g.output);
      t.write(sink.out(), g.json);
    }
  });

  // kernel eval / basis eval
  auto* kernel = app.add_subcommand("kernel", "reproducing kernel");
  kernel->require_subcommand(1);
  auto* kernel_eval = kernel->add_subcommand("eval", "K(v, x)");
  std::string k_v, k_x;
  kernel_eval->add_option("--v", k_v, "vertex v")->required();
  kernel_eval->add_option("--x", k_x, "vertex x")->required();
  kernel_eval->callback([&] {
    g.params.validate();
    emit_value(g, "kernel", hbt::Bergman(g.params).kernel(vtx(g, k_v), vtx(g, k_x)));
  });

  auto* basis = app.add_subcommand("basis", "orthonormal basis");
  basis->require_subcommand(1);
  auto* basis_eval = basis->add_subcommand("eval", "g_{v,j}(x)");
  std::string b_v, b_x;
  int b_j = 1;
  basis_eval->add_option("--v", b_v, "vertex v")->required();
  basis_eval->add_option("--j", b_j, "index in 1..q-1")->required();
  basis_eval->add_option("--x", b_x, "vertex x")->required();
  basis_eval->callback([&] {
    g.params.validate();
    if (b_j < 1 || b_j >= g.params.q) throw std::invalid_argument("--j must be in 1..q-1");
    emit_value(g, "basis", hbt::Bergman(g.params).eval_basis({vtx(g, b_v), b_j}, vtx(g, b_x)));
  });

  // coeff dump
  auto* coeff = app.add_subcommand("coeff", "inner-product coefficients");
  coeff->require_subcommand(1);
  auto* dump = coeff->add_subcommand("dump", "C, Cp and b(n) over a window");
  int c_from = -3, c_to = 3;
  dump->add_option("--from", c_from, "first n")->capture_default_str();
  dump->add_option("--to", c_to, "last n")->capture_default_str();
  dump->callback([&] {
    const auto c = hbt::Coefficients::compute(g.params);
    Table t({"key", "value"});
    t.row({"C", c.C});
    t.row({"Cp", c.Cp});
    for (int n = c_from; n <= c_to; ++n) t.row({"b(" + std::to_string(n) + ")", c.b(n)});
    Sink s(g.output);
    t.write(s.out(), g.json);
  });

  // project
  auto* project = app.add_subcommand("project", "Bergman projection of a finite function");
  std::string p_f, p_at;
  project->add_option("--f", p_f, "CSV file")->required();
  project->add_option("--at", p_at, "comma-separated vertices")->required();
  project->callback([&] {
    const hbt::Bergman B(g.params);
    const auto f = hbt::read_finite_function_file(p_f, g.params.q);
    Table t({"vertex", "value"});
    for (const auto& s : split_list(p_at)) t.row({s, hbt::project_eval(B, f, vtx(g, s))});
    Sink sink(g.output);
    t.write(sink.out(), g.json);
  });

  // cz
  auto* cz = app.add_subcommand("cz", "Calderón-Zygmund decomposition");
  std::string cz_f;
  double cz_lambda = 1.0;
  cz->add_option("--f", cz_f, "CSV file")->required();
  cz->add_option("--lambda", cz_lambda, "height")->required();
  cz->callback([&] {
    const hbt::Measure m(g.params);
    const auto out = hbt::cz_decompose(m, hbt::read_finite_function_file(cz_f, g.params.q), cz_lambda);
    Table t({"part", "where", "value"});
    for (const auto& d : out.selected) t.row({"selected", d.to_string(), nullptr});
    for (const auto& [x, v] : out.good.overrides()) t.row({"good", x.to_string(), v});
    for (const auto& p : out.good.pieces()) t.row({"good", p.set.to_string(), p.value});
    for (const auto& b : out.bad) {
      for (const auto& [x, v] : b.part.overrides()) t.row({"bad " + b.cell.to_string(), x.to_string(), v});
      for (const auto& p : b.part.pieces()) t.row({"bad " + b.cell.to_string(), p.set.to_string(), p.value});
    }
    t.row({"start_level", nullptr, out.start_level});
    t.row({"good_constant", nullptr, out.good_constant});
    t.row({"bad_constant", nullptr, out.bad_constant});
    Sink s(g.output);
    t.write(s.out(), g.json);
  });

  // hormander
  auto* horm = app.add_subcommand("hormander", "bounds on the Hörmander integral");
  std::string h_v, h_x, h_y;
  int h_window = 6;
  horm->add_option("--v", h_v, "sector generator")->required();
  horm->add_option("--x", h_x, "vertex in U_v")->required();
  horm->add_option("--y", h_y, "vertex in U_v")->required();
  horm->add_option("--window", h_window, "levels enumerated")->capture_default_str();
  horm->callback([&] {
    const hbt::Bergman B(g.params);
    const auto h = hbt::hormander_sum(B, vtx(g, h_v), vtx(g, h_x), vtx(g, h_y), h_window);
    Table t({"lower", "upper", "constant"});
    t.row({h.lower, h.upper, hbt::hormander_constant(B)});
    Sink s(g.output);
    t.write(s.out(), g.json);
  });

  // atom-check
  auto* atom = app.add_subcommand("atom-check", "check the (1,p)-atom conditions");
  std::string a_f, a_p = "inf", a_cell;
  atom->add_option("--f", a_f, "CSV file")->required();
  atom->add_option("--p", a_p, "exponent in (1, inf]")->capture_default_str();
  atom->add_option("--cell", a_cell, "sector:<vtx>, point:<vtx> or <vtx> (sector)")->required();
  atom->callback([&] {
    const hbt::Measure m(g.params);
    const hbt::PiecewiseFunction a(hbt::read_finite_function_file(a_f, g.params.q));
    const auto cell = parse_cell(g, a_cell);
    const auto r = hbt::is_atom(m, a, parse_p(a_p), cell, g.params.tol);
    Table t({"is_atom", "support_ok", "norm_ok", "mean_ok", "cell", "norm", "norm_bound", "mean"});
    t.row({r.is_atom, r.support_ok, r.norm_ok, r.mean_ok, cell.to_string(), r.norm_check, r.norm_bound, r.mean});
    Sink s(g.output);
    t.write(s.out(), g.json);
  });

  // bmo
  auto* bmo = app.add_subcommand("bmo", "dyadic BMO norm over a window of cells");
  std::string bmo_f;
  int bmo_levels = 6;
  bmo->add_option("--f", bmo_f, "CSV file")->required();
  bmo->add_option("--levels", bmo_levels, "levels above the support hull")->capture_default_str();
  bmo->callback([&] {
    const hbt::Measure m(g.params);
    const auto r = hbt::bmo_norm(m, hbt::read_finite_function_file(bmo_f, g.params.q), bmo_levels);
    Table t({"value", "argmax", "p_levels", "top_level", "above_window_bound", "note"});
    t.row({r.value, r.argmax ? json(r.argmax->to_string()) : json(nullptr), r.p_levels, r.top_level,
           r.above_window_bound, r.note});
    Sink s(g.output);
    t.write(s.out(), g.json);
  });

  // weak11
  auto* weak = app.add_subcommand("weak11", "superlevel masses of the projection (diagnostic)");
  std::string w_f, w_lambdas;
  int w_window = 6;
  weak->add_option("--f", w_f, "CSV file")->required();
  weak->add_option("--lambdas", w_lambdas, "comma-separated heights")->required();
  weak->add_option("--window", w_window, "window depth")->capture_default_str();
  weak->callback([&] {
    const hbt::Bergman B(g.params);
    std::vector<double> lambdas;
    for (const auto& s : split_list(w_lambdas)) lambdas.push_back(std::stod(s));
    const auto f = hbt::read_finite_function_file(w_f, g.params.q);
    const auto rows = f.size() == 1 ? hbt::weak_type_curve_point_mass(B, f.entries().begin()->first,
                                                                      f.entries().begin()->second, lambdas, w_window)
                                    : hbt::weak_type_curve(B, f, lambdas, w_window);
    Table t({"lambda", "mass", "bound", "ratio"});
    for (const auto& r : rows) t.row({r.lambda, r.mass, r.bound, r.ratio()});
    Sink s(g.output);
    t.write(s.out(), g.json);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
