#pragma once

// Structured command output rendered as aligned text, JSON or CSV. Results are
// kept as ordered JSON so every format sees the same field order; doubles are
// rounded to the requested precision only when rendered.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cmpcalc/error.hpp"
#include "cmpcalc/numerics.hpp"

namespace cmpcalc {

using Json = nlohmann::ordered_json;

enum class Format { Text, Json, Csv };

struct RunReport {
  std::string command;
  Json inputs = Json::object();
  Json config = Json::object();
  Json results = Json::object();
  std::vector<std::string> warnings;
};

// FNV-1a, 64 bit.
inline std::string digest(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string format_number(double x, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << x;
  std::string s = os.str();
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

namespace detail {

inline Json rounded(const Json& j, int precision) {
  if (j.is_number_float()) {
    const double scale = std::pow(10.0, precision);
    double r = std::round(j.get<double>() * scale) / scale;
    if (r == 0.0) r = 0.0;
    return r;
  }
  if (j.is_array() || j.is_object()) {
    Json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it, precision);
    return out;
  }
  return j;
}

inline std::string scalar_text(const Json& j, int precision) {
  if (j.is_number_float()) return format_number(j.get<double>(), precision);
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  return j.dump();
}

inline bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

inline bool is_matrix(const Json& j) {
  return j.is_array() && !j.empty() &&
         std::all_of(j.begin(), j.end(), [](const Json& r) {
           return r.is_array() && std::all_of(r.begin(), r.end(), [](const Json& c) { return is_scalar(c); });
         });
}

inline bool is_table(const Json& j) {
  return j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), [](const Json& r) { return r.is_object(); });
}

inline void write_grid(std::ostream& os, const std::vector<std::vector<std::string>>& cells, const std::string& indent) {
  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : cells) {
    std::string line = indent;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
}

inline std::vector<std::vector<std::string>> table_cells(const Json& j, int precision) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header;
  for (auto it = j.front().begin(); it != j.front().end(); ++it) header.push_back(it.key());
  cells.push_back(header);
  for (const auto& row : j) {
    std::vector<std::string> line;
    for (const auto& key : header) line.push_back(row.contains(key) ? scalar_text(row[key], precision) : "");
    cells.push_back(std::move(line));
  }
  return cells;
}

inline std::vector<std::vector<std::string>> matrix_cells(const Json& j, int precision) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : j) {
    std::vector<std::string> line;
    for (const auto& c : row) line.push_back(scalar_text(c, precision));
    cells.push_back(std::move(line));
  }
  return cells;
}

inline void write_text_value(std::ostream& os, const std::string& key, const Json& j, int precision,
                             const std::string& indent) {
  if (is_scalar(j)) {
    os << indent << key << ": " << scalar_text(j, precision) << '\n';
  } else if (is_matrix(j)) {
    os << indent << key << ":\n";
    write_grid(os, matrix_cells(j, precision), indent + "  ");
  } else if (is_table(j)) {
    os << indent << key << ":\n";
    write_grid(os, table_cells(j, precision), indent + "  ");
  } else if (j.is_array()) {
    std::string line;
    for (const auto& item : j) {
      if (!line.empty()) line += ", ";
      line += scalar_text(item, precision);
    }
    os << indent << key << ": " << line << '\n';
  } else {
    os << indent << key << ":\n";
    for (auto it = j.begin(); it != j.end(); ++it) write_text_value(os, it.key(), *it, precision, indent + "  ");
  }
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv_value(std::ostream& os, const std::string& key, const Json& j, int precision) {
  auto emit = [&](const std::vector<std::vector<std::string>>& cells) {
    os << "# " << key << '\n';
    for (const auto& row : cells) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
      os << '\n';
    }
  };
  if (is_scalar(j)) {
    os << csv_cell(key) << ',' << csv_cell(scalar_text(j, precision)) << '\n';
  } else if (is_matrix(j)) {
    emit(matrix_cells(j, precision));
  } else if (is_table(j)) {
    emit(table_cells(j, precision));
  } else if (j.is_array()) {
    os << csv_cell(key);
    for (const auto& item : j) os << ',' << csv_cell(scalar_text(item, precision));
    os << '\n';
  } else {
    for (auto it = j.begin(); it != j.end(); ++it) write_csv_value(os, key + "." + it.key(), *it, precision);
  }
}

}  // namespace detail

inline void render(std::ostream& os, const RunReport& report, Format format, int precision) {
  switch (format) {
    case Format::Json: {
      Json doc;
      doc["command"] = report.command;
      doc["inputs"] = report.inputs;
      doc["config"] = detail::rounded(report.config, precision);
      doc["results"] = detail::rounded(report.results, precision);
      doc["warnings"] = report.warnings;
      os << doc.dump(2) << '\n';
      return;
    }
    case Format::Text: {
      os << "command: " << report.command << '\n';
      for (auto it = report.inputs.begin(); it != report.inputs.end(); ++it) {
        detail::write_text_value(os, "input " + it.key(), *it, precision, "");
      }
      for (auto it = report.config.begin(); it != report.config.end(); ++it) {
        detail::write_text_value(os, it.key(), *it, precision, "");
      }
      for (auto it = report.results.begin(); it != report.results.end(); ++it) {
        detail::write_text_value(os, it.key(), *it, precision, "");
      }
      for (const auto& w : report.warnings) os << "warning: " << w << '\n';
      return;
    }
    case Format::Csv: {
      os << "command," << detail::csv_cell(report.command) << '\n';
      for (auto it = report.inputs.begin(); it != report.inputs.end(); ++it) {
        detail::write_csv_value(os, "input." + it.key(), *it, precision);
      }
      for (auto it = report.config.begin(); it != report.config.end(); ++it) {
        detail::write_csv_value(os, it.key(), *it, precision);
      }
      for (auto it = report.results.begin(); it != report.results.end(); ++it) {
        detail::write_csv_value(os, it.key(), *it, precision);
      }
      for (const auto& w : report.warnings) os << "warning," << detail::csv_cell(w) << '\n';
      return;
    }
  }
}

}  // namespace cmpcalc
