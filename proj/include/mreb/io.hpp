#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "mreb/errors.hpp"
#include "mreb/types.hpp"

namespace mreb {

/// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_double_field(std::string_view field, const std::string& context) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw DataError(context + ": cannot parse '" + std::string(field) + "' as a number");
  }
  return value;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

/// Reads an individual-level CSV (header z1,...,zJ,d,y), validates it, and
/// returns the centered dataset.
inline IndividualDataset load_individual(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  const std::string where = path.filename().string();
  if (lines.empty()) throw DataError(where + ": empty file");

  const auto header = detail::split_csv_line(lines.front());
  if (header.size() < 3) {
    throw DataError(where + ": header must be z1,...,zJ,d,y with at least one instrument");
  }
  const Index J = static_cast<Index>(header.size()) - 2;
  for (Index j = 0; j < J; ++j) {
    if (detail::trim(header[static_cast<std::size_t>(j)]) != "z" + std::to_string(j + 1)) {
      throw DataError(where + ": expected header column z" + std::to_string(j + 1));
    }
  }
  if (detail::trim(header[static_cast<std::size_t>(J)]) != "d" ||
      detail::trim(header[static_cast<std::size_t>(J) + 1]) != "y") {
    throw DataError(where + ": header must end with d,y");
  }

  std::vector<std::string_view> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!detail::trim(lines[i]).empty()) rows.push_back(lines[i]);
  }
  const Index n = static_cast<Index>(rows.size());

  IndividualDataset data;
  data.n = n;
  data.J = J;
  data.Z.resize(n, J);
  data.D.resize(n);
  data.Y.resize(n);
  for (Index i = 0; i < n; ++i) {
    const auto fields = detail::split_csv_line(rows[static_cast<std::size_t>(i)]);
    if (static_cast<Index>(fields.size()) != J + 2) {
      throw DataError(where + ": row " + std::to_string(i + 1) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(J + 2));
    }
    const std::string row_ctx = where + ": row " + std::to_string(i + 1);
    for (Index j = 0; j < J; ++j) {
      const auto field = fields[static_cast<std::size_t>(j)];
      if (detail::trim(field).empty()) {
        throw DataError(row_ctx + ", column z" + std::to_string(j + 1) + ": non-finite entry (missing value)");
      }
      data.Z(i, j) = detail::parse_double_field(field, row_ctx + ", column z" + std::to_string(j + 1));
    }
    const auto d_field = fields[static_cast<std::size_t>(J)];
    const auto y_field = fields[static_cast<std::size_t>(J) + 1];
    if (detail::trim(d_field).empty()) throw DataError(row_ctx + ", column d: non-finite entry (missing value)");
    if (detail::trim(y_field).empty()) throw DataError(row_ctx + ", column y: non-finite entry (missing value)");
    data.D[i] = detail::parse_double_field(d_field, row_ctx + ", column d");
    data.Y[i] = detail::parse_double_field(y_field, row_ctx + ", column y");
  }

  validate(data);
  return center_columns(std::move(data));
}

/// Writes a dataset in the individual CSV layout at full double precision, so
/// a save/load cycle reproduces the values bit for bit.
inline void save_individual(const std::filesystem::path& path, const IndividualDataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open file for writing: " + path.string());
  for (Index j = 0; j < data.J; ++j) out << "z" << (j + 1) << ",";
  out << "d,y\n";
  for (Index i = 0; i < data.n; ++i) {
    for (Index j = 0; j < data.J; ++j) out << format_double(data.Z(i, j)) << ",";
    out << format_double(data.D[i]) << "," << format_double(data.Y[i]) << "\n";
  }
}

/// Reads a summary-statistics CSV (header gamma2,omega,sigma2_omega).
inline SummaryDataset load_summary(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  const std::string where = path.filename().string();
  if (lines.empty()) throw DataError(where + ": no variants (empty file)");

  const auto header = detail::split_csv_line(lines.front());
  if (header.size() != 3 || detail::trim(header[0]) != "gamma2" ||
      detail::trim(header[1]) != "omega" || detail::trim(header[2]) != "sigma2_omega") {
    throw DataError(where + ": header must be gamma2,omega,sigma2_omega");
  }

  std::vector<std::string_view> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!detail::trim(lines[i]).empty()) rows.push_back(lines[i]);
  }
  const Index J = static_cast<Index>(rows.size());
  if (J < 1) throw DataError(where + ": no variants");

  SummaryDataset summary;
  summary.gamma2.resize(J);
  summary.omega.resize(J);
  summary.sigma2_omega.resize(J);
  for (Index j = 0; j < J; ++j) {
    const auto fields = detail::split_csv_line(rows[static_cast<std::size_t>(j)]);
    const std::string row_ctx = where + ": row " + std::to_string(j + 1);
    if (fields.size() != 3) {
      throw DataError(row_ctx + " has " + std::to_string(fields.size()) + " fields, expected 3");
    }
    summary.gamma2[j] = detail::parse_double_field(fields[0], row_ctx + ", column gamma2");
    summary.omega[j] = detail::parse_double_field(fields[1], row_ctx + ", column omega");
    summary.sigma2_omega[j] = detail::parse_double_field(fields[2], row_ctx + ", column sigma2_omega");
  }

  validate(summary);
  return summary;
}

inline void save_summary(const std::filesystem::path& path, const SummaryDataset& summary) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open file for writing: " + path.string());
  out << "gamma2,omega,sigma2_omega\n";
  for (Index j = 0; j < summary.J(); ++j) {
    out << format_double(summary.gamma2[j]) << "," << format_double(summary.omega[j]) << ","
        << format_double(summary.sigma2_omega[j]) << "\n";
  }
}

}  // namespace mreb
