#include "kgf/prep/table.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "kgf/error.hpp"

namespace kgf::prep {

namespace {

bool valid_utf8(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    int extra;
    if (c < 0x80)
      extra = 0;
    else if ((c & 0xE0) == 0xC0)
      extra = 1;
    else if ((c & 0xF0) == 0xE0)
      extra = 2;
    else if ((c & 0xF8) == 0xF0)
      extra = 3;
    else
      return false;
    if (i + extra >= s.size() && extra > 0) return false;
    for (int k = 1; k <= extra; ++k)
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    i += extra + 1;
  }
  return true;
}

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
  if (from >= to || to > s.size()) return false;
  for (std::size_t i = from; i < to; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

bool is_iso_date(const std::string& s) {
  return s.size() == 10 && all_digits(s, 0, 4) && s[4] == '-' &&
         all_digits(s, 5, 7) && s[7] == '-' && all_digits(s, 8, 10);
}

bool is_iso_datetime(const std::string& s) {
  if (s.size() < 16 || !is_iso_date(s.substr(0, 10))) return false;
  if (s[10] != 'T' && s[10] != ' ') return false;
  if (!(all_digits(s, 11, 13) && s[13] == ':' && all_digits(s, 14, 16)))
    return false;
  // optional :ss and zone suffix are accepted leniently
  return true;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

}  // namespace

std::string column_type_name(ColumnType t) {
  switch (t) {
    case ColumnType::String: return "string";
    case ColumnType::Integer: return "integer";
    case ColumnType::Decimal: return "decimal";
    case ColumnType::Boolean: return "boolean";
    case ColumnType::Date: return "date";
    case ColumnType::DateTime: return "datetime";
  }
  return "string";
}

std::optional<ColumnType> column_type_from_name(const std::string& name) {
  if (name == "string") return ColumnType::String;
  if (name == "integer") return ColumnType::Integer;
  if (name == "decimal") return ColumnType::Decimal;
  if (name == "boolean") return ColumnType::Boolean;
  if (name == "date") return ColumnType::Date;
  if (name == "datetime") return ColumnType::DateTime;
  return std::nullopt;
}

bool cell_parses_as(const std::string& value, ColumnType type) {
  switch (type) {
    case ColumnType::String:
      return true;
    case ColumnType::Integer: {
      std::size_t i = value.size() && (value[0] == '+' || value[0] == '-');
      return all_digits(value, i, value.size());
    }
    case ColumnType::Decimal: {
      std::size_t i = value.size() && (value[0] == '+' || value[0] == '-');
      auto dot = value.find('.', i);
      if (dot == std::string::npos) return all_digits(value, i, value.size());
      return all_digits(value, i, dot) && all_digits(value, dot + 1, value.size());
    }
    case ColumnType::Boolean: {
      std::string v = lower(value);
      return v == "true" || v == "false" || v == "0" || v == "1" ||
             v == "yes" || v == "no";
    }
    case ColumnType::Date:
      return is_iso_date(value);
    case ColumnType::DateTime:
      return is_iso_datetime(value);
  }
  return false;
}

ColumnType infer_column_type(const Table& table, std::size_t column) {
  static const ColumnType order[] = {ColumnType::Integer, ColumnType::Decimal,
                                     ColumnType::Date, ColumnType::DateTime,
                                     ColumnType::Boolean, ColumnType::String};
  std::size_t non_null = 0;
  std::size_t counts[6] = {};
  for (const auto& row : table.rows) {
    const Cell& cell = row[column];
    if (!cell) continue;
    ++non_null;
    for (int i = 0; i < 6; ++i)
      if (cell_parses_as(*cell, order[i])) ++counts[i];
  }
  if (non_null == 0) return ColumnType::String;
  for (int i = 0; i < 6; ++i)
    if (counts[i] * 100 >= non_null * 95) return order[i];
  return ColumnType::String;
}

Table parse_csv(const std::string& text, const CsvOptions& options,
                const std::string& table_name) {
  if (!valid_utf8(text)) throw config_error("input is not valid UTF-8");
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool had_field = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    had_field = true;
  };
  auto end_record = [&] {
    if (had_field || !field.empty() || !record.empty()) {
      end_field();
      records.push_back(record);
      record.clear();
    }
    had_field = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      had_field = true;
    } else if (c == options.delimiter) {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_record();
      ++i;
      ++line;
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      field += c;
    }
  }
  if (in_quotes) throw parse_error(line, 1, "unterminated quoted field");
  end_record();

  Table table;
  table.name = table_name;
  if (records.empty()) return table;

  std::size_t width = records[0].size();
  std::size_t first_data = 0;
  if (options.has_header) {
    for (const auto& name : records[0]) table.columns.push_back({name, {}});
    first_data = 1;
  } else {
    for (std::size_t i = 0; i < width; ++i)
      table.columns.push_back({"col" + std::to_string(i + 1), {}});
  }

  for (std::size_t r = first_data; r < records.size(); ++r) {
    if (records[r].size() != width)
      throw parse_error(r + 1, 1,
                        "ragged row: expected " + std::to_string(width) +
                            " cells, got " + std::to_string(records[r].size()));
    std::vector<Cell> row;
    row.reserve(width);
    for (const auto& value : records[r]) {
      bool is_null = false;
      for (const auto& marker : options.null_markers)
        if (value == marker) {
          is_null = true;
          break;
        }
      row.push_back(is_null ? Cell{} : Cell{value});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table ingest_csv(const std::string& path, const CsvOptions& options,
                 const std::string& table_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = table_name;
  if (name.empty()) {
    auto slash = path.find_last_of("/\\");
    name = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
  }
  return parse_csv(buf.str(), options, name);
}

}  // namespace kgf::prep
