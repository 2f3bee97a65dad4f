#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropy.hpp"

namespace treent {

enum class output_format { csv, markdown, json };

inline output_format output_format_from_name(const std::string& name) {
  if (name == "csv") return output_format::csv;
  if (name == "markdown") return output_format::markdown;
  if (name == "json") return output_format::json;
  throw std::invalid_argument("unknown format: " + name +
                              " (expected csv, markdown or json)");
}

/// Fixed-point rendering; tiny negative summation residue is canonicalized
/// so zero never prints with a sign.
inline std::string format_number(double v, int decimals) {
  if (v < 0 && v > -1e-9) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

/// Inserts space separators into the integer digits: 1234567.89 becomes
/// 1 234 567.89.
inline std::string group_thousands(const std::string& s) {
  std::size_t end = s.find('.');
  if (end == std::string::npos) end = s.size();
  std::size_t start = 0;
  while (start < end && (s[start] == '-' || s[start] == '+')) ++start;
  std::string out = s.substr(0, start);
  for (std::size_t i = start; i < end; ++i) {
    if (i > start && (end - i) % 3 == 0) out += ' ';
    out += s[i];
  }
  out += s.substr(end);
  return out;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

/// One output row: an analysis of one input at one history length, or a
/// failed input when error is nonempty.
struct report_row {
  std::string file;
  entropy_report rep;
  std::string error;
};

namespace detail {

struct report_column {
  const char* name;
  bits (*get)(const entropy_report&);
};

inline const std::vector<report_column>& report_columns() {
  static const std::vector<report_column> cols = {
      {"H_shape", [](const entropy_report& r) { return r.h_shape; }},
      {"H_deg", [](const entropy_report& r) { return r.h_deg; }},
      {"H_label", [](const entropy_report& r) { return r.h_label; }},
      {"H_labeldeg", [](const entropy_report& r) { return r.h_labeldeg; }},
      {"H_deglabel", [](const entropy_report& r) { return r.h_deglabel; }},
      {"H_deg_plus_label", [](const entropy_report& r) { return r.h_deg_plus_label(); }},
      {"H_label_plus_labeldeg",
       [](const entropy_report& r) { return r.h_label_plus_labeldeg(); }},
      {"H_deg_plus_deglabel",
       [](const entropy_report& r) { return r.h_deg_plus_deglabel(); }},
  };
  return cols;
}

}  // namespace detail

/// Streams analysis rows in one of three formats. Numbers use two decimals,
/// four for the per-node columns added by `normalized`; the markdown format
/// additionally space-groups thousands.
class report_writer {
 public:
  report_writer(std::ostream& os, output_format fmt, bool normalized)
      : os_(os), fmt_(fmt), normalized_(normalized) {}

  void begin() {
    switch (fmt_) {
      case output_format::csv: {
        os_ << "file,n,k";
        for (const auto& c : detail::report_columns()) os_ << ',' << c.name;
        if (normalized_)
          for (const auto& c : detail::report_columns()) os_ << ',' << c.name << "_per_n";
        os_ << '\n';
        break;
      }
      case output_format::markdown: {
        os_ << "| file | n | k";
        for (const auto& c : detail::report_columns()) os_ << " | " << c.name;
        if (normalized_)
          for (const auto& c : detail::report_columns()) os_ << " | " << c.name << "_per_n";
        os_ << " |\n|---|---:|---:";
        const std::size_t value_cols =
            detail::report_columns().size() * (normalized_ ? 2 : 1);
        for (std::size_t i = 0; i < value_cols; ++i) os_ << "|---:";
        os_ << "|\n";
        break;
      }
      case output_format::json: os_ << "[\n"; break;
    }
  }

  void write(const report_row& row) {
    switch (fmt_) {
      case output_format::csv: write_csv(row); break;
      case output_format::markdown: write_markdown(row); break;
      case output_format::json: write_json(row); break;
    }
  }

  void finish() {
    if (fmt_ == output_format::json) os_ << (any_ ? "\n]\n" : "]\n");
    os_.flush();
  }

 private:
  void write_csv(const report_row& row) {
    if (!row.error.empty()) return;  // failures are reported on stderr
    os_ << csv_escape(row.file) << ',' << row.rep.size << ',' << row.rep.k;
    for (const auto& c : detail::report_columns())
      os_ << ',' << format_number(c.get(row.rep), 2);
    if (normalized_)
      for (const auto& c : detail::report_columns())
        os_ << ',' << format_number(row.rep.per_n(c.get(row.rep)), 4);
    os_ << '\n';
  }

  void write_markdown(const report_row& row) {
    if (!row.error.empty()) {
      os_ << "| " << row.file << " | error: " << row.error;
      const std::size_t value_cols =
          1 + detail::report_columns().size() * (normalized_ ? 2 : 1);
      for (std::size_t i = 0; i < value_cols; ++i) os_ << " |";
      os_ << " |\n";
      return;
    }
    os_ << "| " << row.file << " | " << group_thousands(std::to_string(row.rep.size))
        << " | " << row.rep.k;
    for (const auto& c : detail::report_columns())
      os_ << " | " << group_thousands(format_number(c.get(row.rep), 2));
    if (normalized_)
      for (const auto& c : detail::report_columns())
        os_ << " | " << format_number(row.rep.per_n(c.get(row.rep)), 4);
    os_ << " |\n";
  }

  void write_json(const report_row& row) {
    os_ << (any_ ? ",\n" : "") << "  {\"file\": \"" << json_escape(row.file) << '"';
    if (!row.error.empty()) {
      os_ << ", \"error\": \"" << json_escape(row.error) << "\"}";
    } else {
      os_ << ", \"n\": " << row.rep.size << ", \"k\": " << row.rep.k;
      for (const auto& c : detail::report_columns())
        os_ << ", \"" << c.name << "\": " << format_number(c.get(row.rep), 2);
      if (normalized_)
        for (const auto& c : detail::report_columns())
          os_ << ", \"" << c.name << "_per_n\": "
              << format_number(row.rep.per_n(c.get(row.rep)), 4);
      os_ << '}';
    }
    any_ = true;
  }

  std::ostream& os_;
  output_format fmt_;
  bool normalized_;
  bool any_ = false;
};

}  // namespace treent
