#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace remest {

/// Rendered as an em dash: a value that is not defined (e.g. lambda at k = 0).
struct NoValue {};

using Cell = std::variant<NoValue, long, double, std::string>;

inline constexpr const char* kDash = "—";
inline constexpr const char* kSchemaVersion = "1.0";

struct OutputRecord {
  std::string schema_version = kSchemaVersion;
  std::string command;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_metadata(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the column count");
    rows.push_back(std::move(row));
  }
};

/// Full-precision text of a double (17 significant digits).
inline std::string format_full(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Display text with four decimals.
inline std::string format_display(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

inline std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoValue>) return kDash;
        else if constexpr (std::is_same_v<T, long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return format_full(v);
        else return v;
      },
      c);
}

inline std::string cell_display(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_display(*d);
  return cell_text(c);
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180 quoting, LF line endings)
// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

inline std::string to_csv(const OutputRecord& rec) {
  std::string out = csv_line(rec.columns);
  for (const auto& row : rec.rows) {
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (const auto& c : row) fields.push_back(cell_text(c));
    out += csv_line(fields);
  }
  return out;
}

/// Parses RFC 4180 text into records of fields (first record is the header).
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      records.push_back(std::move(record));
      record.clear();
      field.clear();
      field_started = false;
    } else {
      field += ch;
      field_started = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  if (field_started || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

inline std::string emit_csv(const std::vector<std::vector<std::string>>& records) {
  std::string out;
  for (const auto& r : records) out += csv_line(r);
  return out;
}

// ---------------------------------------------------------------------------
// JSON: {schema_version, command, metadata, rows: [{column: value}]}
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoValue>) return kDash;
        else if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(v)) return v;
          return format_full(v);
        } else return v;
      },
      c);
}

inline std::string to_json(const OutputRecord& rec) {
  nlohmann::ordered_json j;
  j["schema_version"] = rec.schema_version;
  j["command"] = rec.command;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rec.metadata) meta[k] = v;
  j["metadata"] = meta;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rec.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[rec.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Aligned text table with four-decimal display
// ---------------------------------------------------------------------------

namespace detail {

// Display width in code points (UTF-8 continuation bytes do not count).
inline std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char ch : s)
    if ((ch & 0xC0) != 0x80) ++w;
  return w;
}

}  // namespace detail

inline std::string to_text(const OutputRecord& rec) {
  std::vector<std::vector<std::string>> grid;
  grid.push_back(rec.columns);
  for (const auto& row : rec.rows) {
    std::vector<std::string> line;
    for (const auto& c : row) line.push_back(cell_display(c));
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(rec.columns.size(), 0);
  for (const auto& line : grid)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], detail::display_width(line[i]));

  std::ostringstream os;
  for (const auto& [k, v] : rec.metadata) os << "# " << k << ": " << v << '\n';
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) os << "  ";
      os << std::string(width[i] - detail::display_width(line[i]), ' ') << line[i];
    }
    os << '\n';
  }
  return os.str();
}

enum class OutputFormat { text, csv, json };

inline std::string render(const OutputRecord& rec, OutputFormat fmt) {
  switch (fmt) {
    case OutputFormat::csv:
      return to_csv(rec);
    case OutputFormat::json:
      return to_json(rec);
    case OutputFormat::text:
      break;
  }
  return to_text(rec);
}

/// FNV-1a 64-bit digest, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace remest
