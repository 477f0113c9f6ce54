#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aigve::csv {

/// Splits one line on commas. Double-quoted fields may contain commas and
/// doubled quotes; surrounding whitespace of unquoted fields is trimmed.
std::vector<std::string> split_line(std::string_view line);

/// Reads all non-blank lines (CRLF tolerated) and splits them.
std::vector<std::vector<std::string>> read_rows(std::istream& in);

/// Whole-cell finite decimal; nullopt otherwise.
std::optional<double> parse_double(std::string_view cell);
std::optional<float> parse_float(std::string_view cell);

}  // namespace aigve::csv
