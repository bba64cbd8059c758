#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace predlim::csv {

/// Splits one CSV line. Handles double-quoted fields with "" escapes; no embedded newlines.
std::vector<std::string> split_line(std::string_view line);

/// Reads the next non-empty line, stripping a trailing '\r'. Returns false at EOF.
bool next_line(std::istream& in, std::string& line, std::size_t& line_number);

/// Quotes a field only when it contains a comma, quote or whitespace at its ends.
std::string escape(std::string_view field);

std::string format_double(double value);

}  // namespace predlim::csv
