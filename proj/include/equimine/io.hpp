#pragma once

// Readers for the CSV and JSON inputs consumed by the CLI.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "equimine/allocation.hpp"
#include "equimine/equity.hpp"
#include "equimine/errors.hpp"
#include "equimine/mcda.hpp"
#include "equimine/mining.hpp"
#include "equimine/sensnet.hpp"
#include "equimine/topsis.hpp"

namespace equimine::io {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::size_t header_line = 1;
  std::vector<CsvRow> rows;
};

inline std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Comma-delimited, double-quote escaping, blank lines skipped. The first
// non-blank line is the header.
inline CsvTable parse_csv(std::string_view text, std::string source = "<csv>") {
  CsvTable table;
  table.source = std::move(source);
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::size_t line = 1;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    const std::size_t start_line = line;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (quoted) {
        if (c == '"') {
          if (pos + 1 < text.size() && text[pos + 1] == '"') {
            field.push_back('"');
            ++pos;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        quoted = true;
        any = true;
      } else if (c == ',') {
        fields.push_back(trim(field));
        field.clear();
        any = true;
      } else if (c == '\n') {
        ++pos;
        ++line;
        break;
      } else if (c != '\r') {
        field.push_back(c);
        if (c != ' ' && c != '\t') any = true;
      }
    }
    if (quoted) throw ParseError(table.source, start_line, "unterminated quoted field");
    fields.push_back(trim(field));
    if (!any) continue;
    if (!have_header) {
      table.header = std::move(fields);
      table.header_line = start_line;
      have_header = true;
    } else {
      table.rows.push_back({start_line, std::move(fields)});
    }
  }
  if (!have_header) throw ParseError(table.source, 1, "missing header row");
  return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

inline double parse_number(std::string_view s, const std::string& source, std::size_t line) {
  const auto text = trim(s);
  if (text.empty()) throw ParseError(source, line, "empty numeric field");
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(source, line, "'" + text + "' is not a finite number");
  }
  return value;
}

// Accepts plain numbers and "a/b" fractions (numerator / denominator).
inline double parse_ratio(std::string_view s, const std::string& source, std::size_t line) {
  const auto text = trim(s);
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_number(text, source, line);
  const double num = parse_number(std::string_view(text).substr(0, slash), source, line);
  const double den = parse_number(std::string_view(text).substr(slash + 1), source, line);
  if (den == 0.0) throw ParseError(source, line, "zero denominator in '" + text + "'");
  return num / den;
}

// ---------------------------------------------------------------------------
// Indicator table

struct IndicatorRecord {
  std::string country;
  int year = 0;
  equity::IndicatorVector indicators;
};

inline std::vector<IndicatorRecord> load_indicator_table(const CsvTable& table) {
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < table.header.size(); ++i) column[lower(table.header[i])] = i;
  std::vector<std::string> required = {"country", "year"};
  for (auto name : equity::kIndicatorNames) required.emplace_back(name);
  for (const auto& name : required) {
    if (!column.contains(name)) throw ParseError(table.source, table.header_line, "missing column '" + name + "'");
  }
  std::vector<IndicatorRecord> out;
  std::set<std::pair<std::string, int>> seen;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ParseError(table.source, row.line,
                       "expected " + std::to_string(table.header.size()) + " columns, found " +
                           std::to_string(row.fields.size()));
    }
    IndicatorRecord rec;
    rec.country = row.fields[column["country"]];
    if (rec.country.empty()) throw ParseError(table.source, row.line, "empty country");
    const double year = parse_number(row.fields[column["year"]], table.source, row.line);
    if (year != std::floor(year)) throw ParseError(table.source, row.line, "year must be an integer");
    rec.year = static_cast<int>(year);
    std::array<double, equity::kIndicatorCount> v{};
    for (std::size_t k = 0; k < equity::kIndicatorCount; ++k) {
      v[k] = parse_number(row.fields[column[std::string(equity::kIndicatorNames[k])]], table.source, row.line);
    }
    rec.indicators = equity::IndicatorVector::from_array(v);
    if (!seen.emplace(rec.country, rec.year).second) {
      throw DuplicateKeyError(table.source + ":" + std::to_string(row.line) + ": duplicate record (" + rec.country +
                              ", " + std::to_string(rec.year) + ")");
    }
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw ParseError(table.source, table.header_line, "indicator table has no records");
  return out;
}

inline std::vector<IndicatorRecord> load_indicator_table(const std::filesystem::path& path) {
  return load_indicator_table(read_csv(path));
}

// ---------------------------------------------------------------------------
// Pairwise comparison matrix

inline mcda::PairwiseMatrix load_pairwise_matrix(const CsvTable& table) {
  std::vector<std::string> labels(table.header.begin() + (table.header.empty() ? 0 : 1), table.header.end());
  const std::size_t n = labels.size();
  if (n == 0) throw ParseError(table.source, table.header_line, "pairwise matrix header has no labels");
  if (table.rows.size() != n) {
    throw ParseError(table.source, table.header_line,
                     "pairwise matrix has " + std::to_string(table.rows.size()) + " rows for " + std::to_string(n) +
                         " labels");
  }
  std::vector<std::vector<double>> entries;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = table.rows[i];
    if (row.fields.size() != n + 1) {
      throw ParseError(table.source, row.line, "expected " + std::to_string(n + 1) + " columns");
    }
    if (row.fields[0] != labels[i]) {
      throw ParseError(table.source, row.line, "row label '" + row.fields[0] + "' does not match column '" +
                                                   labels[i] + "'");
    }
    std::vector<double> values;
    for (std::size_t j = 1; j <= n; ++j) values.push_back(parse_ratio(row.fields[j], table.source, row.line));
    entries.push_back(std::move(values));
  }
  return mcda::PairwiseMatrix(std::move(entries), std::move(labels));
}

inline mcda::PairwiseMatrix load_pairwise_matrix(const std::filesystem::path& path) {
  return load_pairwise_matrix(read_csv(path));
}

// ---------------------------------------------------------------------------
// Decision matrix: header "label,name:benefit,name:cost,name:mid=<x>"

inline std::pair<std::string, topsis::IndicatorKind> parse_indicator_header(const std::string& cell,
                                                                            const std::string& source,
                                                                            std::size_t line) {
  const auto colon = cell.rfind(':');
  if (colon == std::string::npos) return {cell, topsis::IndicatorKind::benefit()};
  const std::string name = trim(cell.substr(0, colon));
  const std::string kind = lower(trim(cell.substr(colon + 1)));
  if (kind == "benefit") return {name, topsis::IndicatorKind::benefit()};
  if (kind == "cost") return {name, topsis::IndicatorKind::cost()};
  if (kind.starts_with("mid=")) {
    return {name, topsis::IndicatorKind::intermediate(parse_number(kind.substr(4), source, line))};
  }
  throw ParseError(source, line, "unknown indicator kind '" + kind + "' for '" + name + "'");
}

inline topsis::DecisionMatrix load_decision_matrix(const CsvTable& table) {
  topsis::DecisionMatrix m;
  if (table.header.size() < 2) throw ParseError(table.source, table.header_line, "decision matrix needs indicators");
  for (std::size_t j = 1; j < table.header.size(); ++j) {
    auto [name, kind] = parse_indicator_header(table.header[j], table.source, table.header_line);
    m.indicators.push_back(name);
    m.kinds.push_back(kind);
  }
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ParseError(table.source, row.line, "expected " + std::to_string(table.header.size()) + " columns");
    }
    if (!seen.insert(row.fields[0]).second) {
      throw DuplicateKeyError(table.source + ":" + std::to_string(row.line) + ": duplicate alternative '" +
                              row.fields[0] + "'");
    }
    m.alternatives.push_back(row.fields[0]);
    std::vector<double> values;
    for (std::size_t j = 1; j < row.fields.size(); ++j) values.push_back(parse_number(row.fields[j], table.source, row.line));
    m.values.push_back(std::move(values));
  }
  m.validate();
  return m;
}

inline topsis::DecisionMatrix load_decision_matrix(const std::filesystem::path& path) {
  return load_decision_matrix(read_csv(path));
}

// ---------------------------------------------------------------------------
// GDP table: country,gdp

inline std::vector<allocation::CountryGdp> load_gdp_table(const CsvTable& table) {
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < table.header.size(); ++i) column[lower(table.header[i])] = i;
  for (const char* name : {"country", "gdp"}) {
    if (!column.contains(name)) {
      throw ParseError(table.source, table.header_line, std::string("missing column '") + name + "'");
    }
  }
  std::vector<allocation::CountryGdp> out;
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ParseError(table.source, row.line, "expected " + std::to_string(table.header.size()) + " columns");
    }
    allocation::CountryGdp c{row.fields[column["country"]],
                             parse_number(row.fields[column["gdp"]], table.source, row.line)};
    if (!seen.insert(c.country).second) {
      throw DuplicateKeyError(table.source + ":" + std::to_string(row.line) + ": duplicate country '" + c.country +
                              "'");
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<allocation::CountryGdp> load_gdp_table(const std::filesystem::path& path) {
  return load_gdp_table(read_csv(path));
}

// ---------------------------------------------------------------------------
// Scenario and training configuration (JSON)

struct MiningScenario {
  std::string name = "default";
  mining::MiningCurveParams params;
  mining::RevenueWindow window;
  mining::IncomeMode mode = mining::IncomeMode::kCumulative;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

inline double json_time(const nlohmann::json& v, const char* field) {
  if (v.is_string()) {
    const auto s = lower(v.get<std::string>());
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ValidationError(std::string("scenario field '") + field + "' must be a number or \"inf\"");
  }
  if (!v.is_number()) throw ValidationError(std::string("scenario field '") + field + "' must be a number");
  return v.get<double>();
}

inline MiningScenario parse_scenario(const nlohmann::json& j) {
  MiningScenario s;
  try {
    s.name = j.value("name", s.name);
    s.params = mining::MiningCurveParams(j.value("dof", mining::kDefaultDof), j.value("location", mining::kDefaultLocation),
                                         j.value("scale", mining::kDefaultScale),
                                         j.value("total_value", mining::kDefaultTotalValue));
    s.window.cost = j.value("cost", 0.0);
    if (j.contains("t1")) s.window.t1 = json_time(j["t1"], "t1");
    if (j.contains("t2") && !j["t2"].is_null()) s.window.t2 = json_time(j["t2"], "t2");
    s.mode = mining::parse_income_mode(j.value("mode", std::string("cumulative")));
    if (j.contains("metadata")) s.metadata = j["metadata"];
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed scenario: ") + e.what());
  }
  s.window.validate();
  return s;
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

inline MiningScenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_json(path)); }

inline sensnet::TrainConfig parse_train_config(const nlohmann::json& j) {
  sensnet::TrainConfig c;
  try {
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
    if (j.contains("layer_sizes")) c.layers.sizes = j["layer_sizes"].get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed training config: ") + e.what());
  }
  c.layers.validate();
  return c;
}

inline sensnet::TrainConfig load_train_config(const std::filesystem::path& path) {
  return parse_train_config(read_json(path));
}

}  // namespace equimine::io
