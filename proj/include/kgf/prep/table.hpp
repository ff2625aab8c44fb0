#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kgf::prep {

enum class ColumnType { String, Integer, Decimal, Boolean, Date, DateTime };

std::string column_type_name(ColumnType t);
std::optional<ColumnType> column_type_from_name(const std::string& name);

struct Column {
  std::string name;
  std::optional<ColumnType> declared_type;
};

/// A cell is a string or null.
using Cell = std::optional<std::string>;

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  std::optional<std::size_t> column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i].name == name) return i;
    return std::nullopt;
  }
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  std::vector<std::string> null_markers = {""};
};

/// RFC-4180-style CSV: quoted fields may contain delimiters, quotes doubled,
/// newlines allowed inside quotes. Ragged rows and invalid UTF-8 are errors.
Table ingest_csv(const std::string& path, const CsvOptions& options = {},
                 const std::string& table_name = "");

Table parse_csv(const std::string& text, const CsvOptions& options = {},
                const std::string& table_name = "");

/// True when every non-null cell value parses under the type.
bool cell_parses_as(const std::string& value, ColumnType type);

/// Type inferred when >= 95% of non-null cells parse as it; ties broken by
/// integer < decimal < date < datetime < boolean < string.
ColumnType infer_column_type(const Table& table, std::size_t column);

}  // namespace kgf::prep
