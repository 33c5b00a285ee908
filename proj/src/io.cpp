#include "hbt/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hbt {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& what) {
  throw std::invalid_argument("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

}  // namespace

FiniteFunction read_finite_function(std::istream& in, int q) {
  FiniteFunction f;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(line_no, line.size() + 1, "expected 'vertex,value'");
    const std::string vtx = trim(line.substr(0, comma));
    const std::string val = trim(line.substr(comma + 1));
    Vertex x;
    try {
      x = Vertex::parse(vtx, q);
    } catch (const std::invalid_argument& e) {
      fail(line_no, 1, e.what());
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), value);
    if (ec != std::errc{} || ptr != val.data() + val.size() || val.empty())
      fail(line_no, comma + 2, "bad number '" + val + "'");
    f.add(x, value);
  }
  return f;
}

FiniteFunction read_finite_function_file(const std::string& path, int q) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_finite_function(in, q);
}

void write_finite_function(std::ostream& out, const FiniteFunction& f) {
  for (const auto& [x, v] : f.entries()) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out << x.to_string() << ',' << std::string(buf, ptr) << '\n';
  }
}

}  // namespace hbt
