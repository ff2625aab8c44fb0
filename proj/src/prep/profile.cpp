#include "kgf/prep/profile.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace kgf::prep {

namespace {

bool digits(const std::string& s, std::size_t from, std::size_t to) {
  if (from >= to || to > s.size()) return false;
  for (std::size_t i = from; i < to; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

bool date_with_sep(const std::string& s, char sep, bool year_first) {
  // year_first: YYYY<sep>MM<sep>DD, else DD<sep>MM<sep>YYYY
  if (s.size() != 10) return false;
  if (year_first)
    return digits(s, 0, 4) && s[4] == sep && digits(s, 5, 7) && s[7] == sep &&
           digits(s, 8, 10);
  return digits(s, 0, 2) && s[2] == sep && digits(s, 3, 5) && s[5] == sep &&
         digits(s, 6, 10);
}

bool is_integer(const std::string& s) {
  std::size_t i = s.size() && (s[0] == '+' || s[0] == '-');
  return digits(s, i, s.size());
}

bool is_decimal(const std::string& s, char point) {
  std::size_t i = s.size() && (s[0] == '+' || s[0] == '-');
  auto dot = s.find(point, i);
  if (dot == std::string::npos) return false;
  return digits(s, i, dot) && digits(s, dot + 1, s.size());
}

bool is_boolean_token(const std::string& s) {
  std::string v;
  for (char c : s) v += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return v == "true" || v == "false" || v == "yes" || v == "no";
}

}  // namespace

FormatClass classify_format(const std::string& value) {
  if (date_with_sep(value, '-', true)) return FormatClass::IsoDate;
  if (date_with_sep(value, '.', false)) return FormatClass::DottedDate;
  if (date_with_sep(value, '/', false)) return FormatClass::SlashedDate;
  if (is_integer(value)) return FormatClass::Integer;
  if (is_decimal(value, '.')) return FormatClass::DecimalDot;
  if (is_decimal(value, ',')) return FormatClass::DecimalComma;
  if (is_boolean_token(value)) return FormatClass::BooleanToken;
  return FormatClass::Other;
}

std::string format_class_name(FormatClass c) {
  switch (c) {
    case FormatClass::IsoDate: return "iso-date";
    case FormatClass::DottedDate: return "dotted-date";
    case FormatClass::SlashedDate: return "slashed-date";
    case FormatClass::Integer: return "integer";
    case FormatClass::DecimalDot: return "decimal-dot";
    case FormatClass::DecimalComma: return "decimal-comma";
    case FormatClass::BooleanToken: return "boolean";
    case FormatClass::Other: return "other";
  }
  return "other";
}

const CriterionEntry& QualityProfile::entry(const std::string& name) const {
  for (const auto& c : criteria)
    if (c.criterion == name) return c;
  throw std::out_of_range("unknown criterion: " + name);
}

QualityProfile profile(const Table& table) {
  QualityProfile p;
  p.table = table.name;
  CriterionEntry& interpretability = p.criteria[0];
  CriterionEntry& uniformity = p.criteria[1];
  CriterionEntry& credibility = p.criteria[2];
  CriterionEntry& faultlessness = p.criteria[3];
  CriterionEntry& completeness = p.criteria[4];
  interpretability.criterion = "unambiguous_interpretability";
  uniformity.criterion = "uniform_representation";
  credibility.criterion = "credibility";
  faultlessness.criterion = "faultlessness";
  completeness.criterion = "completeness";

  const std::size_t cols = table.columns.size();
  const std::size_t total_cells = cols * table.rows.size();

  // completeness = 1 - null cells / total cells
  std::size_t null_cells = 0;
  for (const auto& row : table.rows)
    for (const auto& cell : row)
      if (!cell) ++null_cells;
  completeness.score =
      total_cells == 0
          ? 1.0
          : 1.0 - static_cast<double>(null_cells) /
                      static_cast<double>(total_cells);
  if (null_cells > 0) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<std::size_t> rows_with_null;
      for (std::size_t r = 0; r < table.rows.size(); ++r)
        if (!table.rows[r][c]) rows_with_null.push_back(r);
      if (!rows_with_null.empty())
        completeness.findings.push_back(
            {table.columns[c].name,
             std::to_string(rows_with_null.size()) + " null cell(s)",
             rows_with_null});
    }
  }

  // uniform_representation: per column, largest format cluster / non-null
  double uniformity_sum = 0;
  std::size_t uniformity_cols = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::map<FormatClass, std::size_t> clusters;
    std::size_t non_null = 0;
    for (const auto& row : table.rows)
      if (row[c]) {
        ++clusters[classify_format(*row[c])];
        ++non_null;
      }
    if (non_null == 0) continue;
    ++uniformity_cols;
    std::size_t largest = 0;
    for (const auto& [_, n] : clusters) largest = std::max(largest, n);
    double ratio = static_cast<double>(largest) / static_cast<double>(non_null);
    uniformity_sum += ratio;
    if (clusters.size() > 1) {
      std::string msg = "mixed formats:";
      for (const auto& [cls, n] : clusters)
        msg += " " + format_class_name(cls) + "=" + std::to_string(n);
      uniformity.findings.push_back({table.columns[c].name, msg, {}});
    }
  }
  uniformity.score =
      uniformity_cols == 0 ? 1.0 : uniformity_sum / uniformity_cols;

  // faultlessness: fraction of non-null cells parseable under the column's
  // declared or inferred type
  std::size_t parseable = 0, non_null_total = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    ColumnType type = table.columns[c].declared_type
                          ? *table.columns[c].declared_type
                          : infer_column_type(table, c);
    std::vector<std::size_t> bad_rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const Cell& cell = table.rows[r][c];
      if (!cell) continue;
      ++non_null_total;
      if (cell_parses_as(*cell, type))
        ++parseable;
      else
        bad_rows.push_back(r);
    }
    if (!bad_rows.empty())
      faultlessness.findings.push_back(
          {table.columns[c].name,
           std::to_string(bad_rows.size()) + " cell(s) not parseable as " +
               column_type_name(type),
           bad_rows});
  }
  faultlessness.score =
      non_null_total == 0
          ? 1.0
          : static_cast<double>(parseable) / static_cast<double>(non_null_total);

  // manual criteria: heuristic findings only
  std::set<std::string> seen_names;
  for (const auto& col : table.columns)
    if (!seen_names.insert(col.name).second)
      interpretability.findings.push_back(
          {col.name, "duplicate column name", {}});
  for (std::size_t c = 0; c < cols; ++c) {
    std::set<std::string> values;
    std::size_t non_null = 0;
    for (const auto& row : table.rows)
      if (row[c]) {
        values.insert(*row[c]);
        ++non_null;
      }
    if (non_null > 1 && values.size() == 1)
      interpretability.findings.push_back(
          {table.columns[c].name, "constant column", {}});
  }
  // credibility: out-of-range dates (before 1900 or after 2100)
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<std::size_t> odd_rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const Cell& cell = table.rows[r][c];
      if (!cell || classify_format(*cell) != FormatClass::IsoDate) continue;
      int year = std::stoi(cell->substr(0, 4));
      if (year < 1900 || year > 2100) odd_rows.push_back(r);
    }
    if (!odd_rows.empty())
      credibility.findings.push_back(
          {table.columns[c].name, "date outside plausible range [1900,2100]",
           odd_rows});
  }
  return p;
}

std::string profile_to_json(const QualityProfile& p) {
  nlohmann::json j;
  j["table"] = p.table;
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : p.criteria) {
    nlohmann::json e;
    e["criterion"] = c.criterion;
    if (c.score)
      e["score"] = *c.score;
    else
      e["score"] = "manual";
    e["findings"] = nlohmann::json::array();
    for (const auto& f : c.findings) {
      nlohmann::json fj;
      fj["column"] = f.column;
      fj["message"] = f.message;
      fj["row_indices"] = f.row_indices;
      e["findings"].push_back(fj);
    }
    j["criteria"].push_back(e);
  }
  return j.dump(2) + "\n";
}

std::string profile_to_markdown(const QualityProfile& p) {
  std::string out = "## Data quality profile: " + p.table + "\n\n";
  out += "| criterion | score | findings |\n|---|---|---|\n";
  for (const auto& c : p.criteria) {
    out += "| " + c.criterion + " | ";
    if (c.score) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", *c.score);
      out += buf;
    } else {
      out += "manual";
    }
    out += " | " + std::to_string(c.findings.size()) + " |\n";
  }
  for (const auto& c : p.criteria)
    for (const auto& f : c.findings)
      out += "- **" + c.criterion + "** `" + f.column + "`: " + f.message + "\n";
  return out;
}

}  // namespace kgf::prep
