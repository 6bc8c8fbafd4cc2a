#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gazemark::csv {

// Plain comma-separated values, no quoting: none of the formats defined here
// carry embedded commas. Newline is '\n' so exports are byte-stable.

std::vector<std::string> split_line(const std::string& line, char delim = ',');

std::string join_row(std::span<const std::string> cells, char delim = ',');

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

std::string format_optional(const std::optional<double>& v);

double parse_double(const std::string& s);  // throws BadValue
long parse_long(const std::string& s);      // throws BadValue
bool parse_bool01(const std::string& s);    // "0"/"1", throws BadValue
std::optional<double> parse_optional_double(const std::string& s);  // empty -> nullopt

std::string trim(const std::string& s);

}  // namespace gazemark::csv
