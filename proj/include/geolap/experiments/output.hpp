#pragma once

// CSV and JSON emitters shared by the experiment runners. Doubles are written
// with 17 significant digits so files round-trip exactly.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "geolap/assumption_audit.hpp"
#include "geolap/bias_expansion.hpp"

namespace geolap::experiments {

inline constexpr const char* kCsvSchema = "geolap-csv v1";

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC 4180: quote fields holding separators, quotes or line breaks.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::string& kind, const std::vector<std::string>& columns) : os_(os) {
    os_ << "# " << kCsvSchema << ' ' << kind << '\n';
    for (std::size_t k = 0; k < columns.size(); ++k) os_ << (k ? "," : "") << csv_field(columns[k]);
    os_ << '\n';
    width_ = columns.size();
  }

  CsvWriter& operator<<(const std::string& s) { return put(csv_field(s)); }
  CsvWriter& operator<<(const char* s) { return put(csv_field(s)); }
  CsvWriter& operator<<(double v) { return put(format_double(v)); }
  template <std::unsigned_integral U>
  CsvWriter& operator<<(U v) {
    return put(std::to_string(v));
  }

  void end_row() {
    if (col_ != width_)
      throw std::logic_error("CsvWriter: row has " + std::to_string(col_) + " fields, expected " +
                             std::to_string(width_));
    os_ << '\n';
    col_ = 0;
  }

 private:
  CsvWriter& put(const std::string& field) {
    if (col_) os_ << ',';
    os_ << field;
    ++col_;
    return *this;
  }

  std::ostream& os_;
  std::size_t width_ = 0;
  std::size_t col_ = 0;
};

/// Splits one CSV line, honouring RFC 4180 quoting (no embedded newlines).
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

/// A number, or null when not finite.
inline nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

inline nlohmann::json to_json(const AssumptionAudit& a) {
  return {{"K_hat", json_number(a.K_hat)},
          {"eps0", json_number(a.eps0)},
          {"kappa_hat", json_number(a.kappa_hat)},
          {"max_violation", json_number(a.max_violation)},
          {"degenerate", a.degenerate},
          {"pair_count", a.pair_count}};
}

inline nlohmann::json to_json(const BiasBoundReport& r) {
  return {{"eps", json_number(r.eps)},         {"eps0", json_number(r.eps0)},
          {"r_x", json_number(r.r_x)},         {"beta", json_number(r.beta_val)},
          {"R1", json_number(r.R1)},           {"R3", json_number(r.R3)},
          {"quad_bias", json_number(r.quad_bias)}, {"R2_residual", json_number(r.R2_residual)}};
}

inline std::ofstream open_output(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / file;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return os;
}

inline void write_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

}  // namespace geolap::experiments
