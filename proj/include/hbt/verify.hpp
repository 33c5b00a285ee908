#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hbt/params.hpp"

namespace hbt {

struct RunConfig {
  Params params;
  std::uint64_t seed = 0;
};

/// One line of a suite report. `expected` carries the relation for
/// inequality checks, e.g. "<=4".
struct CheckRow {
  std::string check_id;
  std::string anchor;  // the statement being checked
  std::string input;
  std::string expected;
  std::string got;
  std::string tol;
  bool pass = false;
};

struct Report {
  std::string suite;
  std::vector<CheckRow> rows;  // sorted by check_id
  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
};

/// geometry, measure, harmonic, orthonormality, kernel, projection, cz,
/// hormander, hardy-bmo, all.
const std::vector<std::string>& suite_names();

/// Runs a suite; throws std::invalid_argument for an unknown name or bad params.
Report run_suite(const std::string& name, const RunConfig& cfg);

/// CSV with header check_id,anchor,input,expected,got,tol,pass.
void write_report_csv(std::ostream& out, const Report& r);
void write_report_json(std::ostream& out, const Report& r);

}  // namespace hbt
