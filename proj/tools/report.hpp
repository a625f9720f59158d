#pragma once

// CSV / JSON serialisation of tabular reports.
//
// CSV: UTF-8, '#'-prefixed metadata lines, one header row, comma separated.
// Floats are written as the shortest decimal that round-trips to the same
// double, exact rationals as "p/q", big integers in full.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include <bspin/exact.hpp>

namespace bspin::report {

inline constexpr const char* kToolName = "bspin";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<long long, BigInt, double, Rational, std::string>;

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const BigInt& v) const { return v.str(); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const Rational& v) const { return bspin::to_string(v); }
    std::string operator()(const std::string& v) const { return quote_if_needed(v); }
  };
  return std::visit(Visitor{}, c);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Meta {
  std::string verb;
  std::string command_line;
  std::optional<std::uint64_t> seed;
};

struct Report {
  Meta meta;
  Table table;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

/// '#'-prefixed lines; summary values are written in their JSON form.
inline std::vector<std::string> meta_lines(const Report& r) {
  std::vector<std::string> lines{
      std::string("tool=") + kToolName,
      std::string("version=") + kToolVersion,
      "schema=" + std::to_string(kSchemaVersion),
      "verb=" + r.meta.verb,
      "command=" + r.meta.command_line,
      "seed=" + (r.meta.seed ? std::to_string(*r.meta.seed) : std::string("none")),
  };
  for (const auto& [k, v] : r.summary.items()) lines.push_back("summary." + k + "=" + v.dump());
  return lines;
}

struct CsvDocument {
  std::vector<std::string> comments;  // without the leading "# "
  Table table;
};

inline std::string to_csv(const CsvDocument& doc) {
  std::ostringstream os;
  for (const auto& line : doc.comments) os << "# " << line << '\n';
  for (std::size_t i = 0; i < doc.table.columns.size(); ++i) {
    os << (i ? "," : "") << quote_if_needed(doc.table.columns[i]);
  }
  os << '\n';
  for (const auto& row : doc.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

inline std::string to_csv(const Report& r) { return to_csv(CsvDocument{meta_lines(r), r.table}); }

namespace detail {

inline bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

inline Cell infer_cell(const std::string& text, bool quoted) {
  if (quoted) return text;
  if (is_integer_text(text)) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc() && ptr == text.data() + text.size()) return v;
    return BigInt(text);
  }
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const auto p = std::string_view(text).substr(0, slash);
    const auto q = std::string_view(text).substr(slash + 1);
    if (is_integer_text(p) && is_integer_text(q) && q != "0") {
      return Rational(BigInt(std::string(p)), BigInt(std::string(q)));
    }
    return text;
  }
  double d = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec == std::errc() && ptr == text.data() + text.size()) return d;
  return text;
}

inline std::vector<Cell> split_row(const std::string& line) {
  std::vector<Cell> cells;
  std::string cur;
  bool quoted = false, in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = quoted = true;
    } else if (c == ',') {
      cells.push_back(infer_cell(cur, quoted));
      cur.clear();
      quoted = false;
    } else {
      cur += c;
    }
  }
  cells.push_back(infer_cell(cur, quoted));
  return cells;
}

}  // namespace detail

/// Parses CSV produced by to_csv; cell types are inferred from their text.
inline CsvDocument parse_csv(const std::string& text) {
  CsvDocument doc;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!header_seen && line.rfind("# ", 0) == 0) {
      doc.comments.push_back(line.substr(2));
      continue;
    }
    auto cells = detail::split_row(line);
    if (!header_seen) {
      for (auto& c : cells) {
        doc.table.columns.push_back(std::holds_alternative<std::string>(c) ? std::get<std::string>(c)
                                                                           : format_cell(c));
      }
      header_seen = true;
    } else {
      doc.table.rows.push_back(std::move(cells));
    }
  }
  return doc;
}

inline nlohmann::ordered_json cell_to_json(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(const BigInt& v) const { return v.str(); }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return v;
    }
    nlohmann::ordered_json operator()(const Rational& v) const { return bspin::to_string(v); }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json meta_json(const Meta& m) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["schema_version"] = kSchemaVersion;
  j["verb"] = m.verb;
  j["command_line"] = m.command_line;
  if (m.seed) j["seed"] = *m.seed;
  else j["seed"] = nullptr;
  return j;
}

inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(r.meta);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.table.columns[i]] = cell_to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  if (!r.summary.empty()) j["summary"] = r.summary;
  return j;
}

inline nlohmann::ordered_json error_json(const Meta& m, const std::string& kind,
                                         const std::string& message,
                                         std::optional<double> best_estimate = std::nullopt) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(m);
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  if (best_estimate && std::isfinite(*best_estimate)) j["error"]["best_estimate"] = *best_estimate;
  return j;
}

}  // namespace bspin::report
