#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "clocklab/core/error.hpp"

namespace clocklab::cli {

using CsvValue = std::variant<double, std::int64_t, std::string>;
using CsvRow = std::vector<CsvValue>;

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos && (s.empty() || (s.front() != ' ' && s.back() != ' ')))
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string format_cell(const CsvValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return quote_field(std::get<std::string>(v));
}

/// Writes header and rows; CRLF line endings, 17 significant digits.
inline std::size_t write_csv(std::ostream& os, const std::vector<std::string>& header,
                             const std::vector<CsvRow>& rows) {
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << quote_field(header[k]);
  os << "\r\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw Error(Errc::invalid_argument, "CSV row width " + std::to_string(row.size()) +
                                              " does not match header width " +
                                              std::to_string(header.size()));
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_cell(row[k]);
    os << "\r\n";
  }
  return rows.size();
}

/// Writes a CSV file and returns the number of data rows.
inline std::size_t emit_csv(const std::vector<CsvRow>& rows, const std::vector<std::string>& header,
                            const std::string& path) {
  for (const auto& row : rows)
    if (row.size() != header.size())
      throw Error(Errc::invalid_argument, "CSV row width does not match header");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::invalid_argument, "cannot open " + path + " for writing");
  const auto n = write_csv(out, header, rows);
  out.flush();
  if (!out) throw Error(Errc::invalid_argument, "write to " + path + " failed");
  return n;
}

}  // namespace clocklab::cli
