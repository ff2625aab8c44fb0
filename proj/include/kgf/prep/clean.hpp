#pragma once

#include <string>
#include <vector>

#include "kgf/prep/table.hpp"

namespace kgf::prep {

struct CleanOp {
  enum Kind { Trim, Lowercase, Replace, Cast, DropRowsWhereNull };
  Kind kind = Trim;
  std::string column;               // Lowercase, Replace, Cast
  std::string from, to;             // Replace
  ColumnType type = ColumnType::String;  // Cast
  std::vector<std::string> columns;      // DropRowsWhereNull

  static CleanOp trim() { return {}; }
  static CleanOp lowercase(std::string column);
  static CleanOp replace(std::string column, std::string from, std::string to);
  static CleanOp cast(std::string column, ColumnType type);
  static CleanOp drop_rows_where_null(std::vector<std::string> columns);
};

struct CleanLog {
  struct Entry {
    std::size_t op_index;
    std::size_t cast_failures;  // cells turned null by a failed cast
    std::size_t rows_dropped;
  };
  std::vector<Entry> entries;
};

/// Applies operations in order. Cast failures null the cell and are counted
/// in the log. Throws kgf::config_error for unknown columns.
std::pair<Table, CleanLog> clean(const Table& table,
                                 const std::vector<CleanOp>& ops);

}  // namespace kgf::prep
