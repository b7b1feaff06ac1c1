#pragma once

// Comma-separated tables: '#' comment lines, one header row, numbers with 17
// significant digits so a written table reads back bit-identically.

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chainthermo/errors.hpp"

namespace chainthermo {

struct Table {
  std::vector<std::string> comments;  // written as "# <line>"
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

  void add_column(std::string name, std::vector<double> values) {
    if (!columns.empty() && values.size() != rows())
      throw ConfigError("column '" + name + "' has " + std::to_string(values.size()) + " rows, table has " +
                        std::to_string(rows()));
    names.push_back(std::move(name));
    columns.push_back(std::move(values));
  }

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return columns[i];
    throw ConfigError("no column named '" + name + "'");
  }

  bool has_column(const std::string& name) const {
    for (const auto& n : names)
      if (n == name) return true;
    return false;
  }
};

/// %.17g, with nan/inf spelled so that strtod reads them back.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Shortest text that reads back as x; for labels and config files.
inline std::string format_short(double x) {
  if (!std::isfinite(x)) return format_double(x);
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text, const std::string& what) {
  std::size_t b = text.find_first_not_of(" \t\r");
  std::size_t e = text.find_last_not_of(" \t\r");
  if (b == std::string::npos) throw ConfigError(what + ": empty number");
  const std::string s = text.substr(b, e - b + 1);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ConfigError(what + ": not a number: '" + s + "'");
  if (errno == ERANGE && std::isinf(v)) throw ConfigError(what + ": out of range: '" + s + "'");
  return v;
}

inline void write_csv(std::ostream& out, const Table& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t j = 0; j < table.names.size(); ++j) out << (j ? "," : "") << table.names[j];
  out << '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j)
      out << (j ? "," : "") << format_double(table.columns[j][i]);
    out << '\n';
  }
}

inline Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!have_header) {
      t.names = cells;
      t.columns.assign(cells.size(), {});
      have_header = true;
      continue;
    }
    if (cells.size() != t.names.size())
      throw ConfigError("csv line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(t.names.size()));
    for (std::size_t j = 0; j < cells.size(); ++j)
      t.columns[j].push_back(parse_double(cells[j], "csv line " + std::to_string(line_no)));
  }
  if (!have_header) throw ConfigError("csv has no header row");
  return t;
}

}  // namespace chainthermo
