#pragma once

#include <iosfwd>
#include <string>

#include "hbt/functions.hpp"

namespace hbt {

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Reads CSV lines `anchor:word,value`. Blank lines and lines starting with
/// '#' are skipped. Errors carry the line and column.
FiniteFunction read_finite_function(std::istream& in, int q);
FiniteFunction read_finite_function_file(const std::string& path, int q);

/// Writes one `anchor:word,value` line per support point, values with 17
/// significant digits.
void write_finite_function(std::ostream& out, const FiniteFunction& f);

}  // namespace hbt
