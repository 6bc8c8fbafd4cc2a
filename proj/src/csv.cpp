#include "gazemark/csv.hpp"

#include <charconv>
#include <cstdlib>

#include "gazemark/error.hpp"

namespace gazemark::csv {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  // strip trailing CR from files with Windows line endings
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
    out.back().pop_back();
  }
  return out;
}

std::string join_row(std::span<const std::string> cells, char delim) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out.push_back(delim);
    out += cells[i];
  }
  out.push_back('\n');
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  double out = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(ErrorCode::BadValue, "not a number: '" + s + "'");
  }
  return out;
}

long parse_long(const std::string& s) {
  const std::string t = trim(s);
  long out = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(ErrorCode::BadValue, "not an integer: '" + s + "'");
  }
  return out;
}

bool parse_bool01(const std::string& s) {
  const std::string t = trim(s);
  if (t == "0") return false;
  if (t == "1") return true;
  throw Error(ErrorCode::BadValue, "expected 0 or 1, got '" + s + "'");
}

std::optional<double> parse_optional_double(const std::string& s) {
  if (trim(s).empty()) return std::nullopt;
  return parse_double(s);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

}  // namespace gazemark::csv
