#pragma once

// Minimal CSV reading for the tabular inputs: comma separated, optional double
// quotes, surrounding whitespace trimmed, blank lines and '#' lines skipped.

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cmpcalc/error.hpp"

namespace cmpcalc::csv {

using Row = std::vector<std::string>;

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    Row row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        row.push_back(trim(cell));
        cell.clear();
      } else {
        cell += c;
      }
    }
    if (quoted) throw InputError("CSV line " + std::to_string(line_no) + ": unterminated quote");
    row.push_back(trim(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::optional<double> to_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace cmpcalc::csv
