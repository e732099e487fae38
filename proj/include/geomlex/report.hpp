#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "geomlex/error.hpp"
#include "geomlex/rng.hpp"

namespace geomlex {

// Structured result of one analysis run. Serialization is byte-deterministic:
// keys appear in insertion order and every float is printed with 17
// significant digits.
struct AnalysisReport {
  using ParamValue = std::variant<std::int64_t, double, std::string>;

  struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::string> row_labels;  // optional, may be empty
    std::vector<std::vector<double>> rows;
  };

  std::string tool;
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> digest
  std::vector<std::pair<std::string, ParamValue>> params;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<Table> tables;

  void add_input(std::string name, std::string_view content) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(content)));
    inputs.emplace_back(std::move(name), buf);
  }

  void add_param(std::string name, ParamValue v) {
    params.emplace_back(std::move(name), std::move(v));
  }

  void add_scalar(std::string name, double v) {
    if (!std::isfinite(v))
      throw Error("validation", "non-finite scalar result: " + name);
    scalars.emplace_back(std::move(name), v);
  }

  std::string to_json() const;
};

namespace detail {

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

inline std::string json_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // bare "inf"/"nan" never reach here; scalars are validated on insertion
  return s;
}

}  // namespace detail

inline std::string AnalysisReport::to_json() const {
  std::string out = "{\"tool\":\"" + detail::json_escape(tool) + "\"";

  out += ",\"inputs\":{";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i) out += ',';
    out += '"' + detail::json_escape(inputs[i].first) + "\":\"" +
           inputs[i].second + '"';
  }
  out += '}';

  out += ",\"params\":{";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += '"' + detail::json_escape(params[i].first) + "\":";
    const auto& v = params[i].second;
    if (std::holds_alternative<std::int64_t>(v))
      out += std::to_string(std::get<std::int64_t>(v));
    else if (std::holds_alternative<double>(v))
      out += detail::json_number(std::get<double>(v));
    else
      out += '"' + detail::json_escape(std::get<std::string>(v)) + '"';
  }
  out += '}';

  out += ",\"scalars\":{";
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    if (i) out += ',';
    out += '"' + detail::json_escape(scalars[i].first) +
           "\":" + detail::json_number(scalars[i].second);
  }
  out += '}';

  out += ",\"tables\":{";
  for (std::size_t t = 0; t < tables.size(); ++t) {
    if (t) out += ',';
    const auto& tab = tables[t];
    out += '"' + detail::json_escape(tab.name) + "\":{\"columns\":[";
    for (std::size_t c = 0; c < tab.columns.size(); ++c) {
      if (c) out += ',';
      out += '"' + detail::json_escape(tab.columns[c]) + '"';
    }
    out += ']';
    if (!tab.row_labels.empty()) {
      out += ",\"row_labels\":[";
      for (std::size_t r = 0; r < tab.row_labels.size(); ++r) {
        if (r) out += ',';
        out += '"' + detail::json_escape(tab.row_labels[r]) + '"';
      }
      out += ']';
    }
    out += ",\"rows\":[";
    for (std::size_t r = 0; r < tab.rows.size(); ++r) {
      if (r) out += ',';
      out += '[';
      for (std::size_t c = 0; c < tab.rows[r].size(); ++c) {
        if (c) out += ',';
        out += detail::json_number(tab.rows[r][c]);
      }
      out += ']';
    }
    out += "]}";
  }
  out += "}}";
  return out;
}

}  // namespace geomlex
