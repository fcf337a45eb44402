#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace yulesim::io {

/// Shortest decimal form with 17 significant digits ("%.17g"); round-trips
/// every finite double. Infinities are written as "inf" / "-inf".
std::string format_real(double value);

/// Parses a value written by format_real.
double parse_real(std::string_view text);

/// Splits CSV text into data rows, skipping blank lines and `#` comments.
/// The first returned row is the header.
std::vector<std::vector<std::string>> read_csv_rows(std::string_view text);

/// Lines of `text` that start with `#`, without the leading "# ".
std::vector<std::string> comment_lines(std::string_view text);

}  // namespace yulesim::io
