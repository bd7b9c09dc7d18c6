#pragma once

// Tabular experiment reports and their CSV / JSON serializations.
//
// CSV layout:
//   # params: key=value;key=value;...
//   col_a,col_b,...
//   rows (RFC 4180 quoting, reals with 12 significant digits)
//
// JSON layout: {"experiment", "params", "columns", "rows", "verdict", "notes",
// "sub_reports"} with rows as objects keyed by column name.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qgt {

using Value = std::variant<std::int64_t, double, std::string, bool>;

enum class Verdict { consistent_with_quasi_greedy, witnesses_failure, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent_with_quasi_greedy: return "consistent-with-quasi-greedy";
    case Verdict::witnesses_failure: return "witnesses-failure";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct ExperimentReport {
  std::string experiment;
  std::map<std::string, Value> params;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  std::optional<Verdict> verdict;
  std::string notes;
  std::vector<ExperimentReport> sub_reports;

  void add_row(std::vector<Value> row) {
    if (row.size() != columns.size())
      throw std::logic_error("report '" + experiment + "': row has " + std::to_string(row.size()) +
                             " cells for " + std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
  }

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("report '" + experiment + "' has no column '" + std::string(name) + "'");
  }

  /// Numeric cell as double (integers are widened).
  double number(std::size_t row, std::string_view name) const {
    const auto& v = rows.at(row).at(column(name));
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw std::invalid_argument("column '" + std::string(name) + "' is not numeric");
  }

  std::vector<double> numbers(std::string_view name) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(number(r, name));
    return out;
  }

  double param_number(const std::string& key) const {
    const auto& v = params.at(key);
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw std::invalid_argument("param '" + key + "' is not numeric");
  }
};

namespace detail {

inline std::string format_cell(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.12g", x);
          return buf;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return x;
        }
      },
      v);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

inline std::string to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "# params: ";
  bool first = true;
  auto param = [&](const std::string& k, const std::string& v) {
    os << (first ? "" : ";") << k << '=' << v;
    first = false;
  };
  param("experiment", r.experiment);
  for (const auto& [k, v] : r.params) param(k, detail::format_cell(v));
  if (r.verdict) param("verdict", to_string(*r.verdict));
  os << "\r\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    os << (i ? "," : "") << detail::csv_quote(r.columns[i]);
  os << "\r\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << detail::csv_quote(detail::format_cell(row[i]));
    os << "\r\n";
  }
  return os.str();
}

inline nlohmann::ordered_json to_json(const ExperimentReport& r) {
  auto value = [](const Value& v) -> nlohmann::ordered_json {
    return std::visit([](const auto& x) { return nlohmann::ordered_json(x); }, v);
  };
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) j["params"][k] = value(v);
  j["columns"] = r.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = value(row[i]);
    j["rows"].push_back(std::move(obj));
  }
  j["verdict"] = r.verdict ? nlohmann::ordered_json(to_string(*r.verdict)) : nlohmann::ordered_json(nullptr);
  j["notes"] = r.notes;
  j["sub_reports"] = nlohmann::ordered_json::array();
  for (const auto& sub : r.sub_reports) j["sub_reports"].push_back(to_json(sub));
  return j;
}

inline std::string to_json_string(const ExperimentReport& r) { return to_json(r).dump(2) + "\n"; }

/// Parsed CSV report: params, header and rows as raw strings.
struct CsvTable {
  std::map<std::string, std::string> params;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Reads the layout written by to_csv.
inline CsvTable parse_csv(std::string_view text) {
  CsvTable out;
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, line_start = true;
  std::size_t i = 0;

  // Params line.
  const std::string_view prefix = "# params: ";
  if (text.substr(0, prefix.size()) != prefix) throw std::invalid_argument("missing params line");
  auto eol = text.find('\n');
  auto params_line = text.substr(prefix.size(), eol - prefix.size());
  if (!params_line.empty() && params_line.back() == '\r') params_line.remove_suffix(1);
  std::size_t start = 0;
  while (start < params_line.size()) {
    auto semi = params_line.find(';', start);
    auto item = params_line.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("malformed param '" + std::string(item) + "'");
    out.params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  i = eol == std::string_view::npos ? text.size() : eol + 1;

  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      line_start = false;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      line_start = false;
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      if (!line_start || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      field.clear();
      record.clear();
      line_start = true;
    } else {
      field += c;
      line_start = false;
    }
  }
  if (!line_start) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw std::invalid_argument("missing header line");
  out.columns = std::move(records.front());
  out.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  return out;
}

}  // namespace qgt
