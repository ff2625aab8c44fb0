#include "kgf/prep/clean.hpp"

#include <algorithm>
#include <cctype>

#include "kgf/error.hpp"

namespace kgf::prep {

CleanOp CleanOp::lowercase(std::string column) {
  CleanOp op;
  op.kind = Lowercase;
  op.column = std::move(column);
  return op;
}
CleanOp CleanOp::replace(std::string column, std::string from, std::string to) {
  CleanOp op;
  op.kind = Replace;
  op.column = std::move(column);
  op.from = std::move(from);
  op.to = std::move(to);
  return op;
}
CleanOp CleanOp::cast(std::string column, ColumnType type) {
  CleanOp op;
  op.kind = Cast;
  op.column = std::move(column);
  op.type = type;
  return op;
}
CleanOp CleanOp::drop_rows_where_null(std::vector<std::string> columns) {
  CleanOp op;
  op.kind = DropRowsWhereNull;
  op.columns = std::move(columns);
  return op;
}

namespace {

std::string trim_string(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::size_t require_column(const Table& t, const std::string& name) {
  auto idx = t.column_index(name);
  if (!idx)
    throw config_error("table '" + t.name + "' has no column '" + name + "'");
  return *idx;
}

}  // namespace

std::pair<Table, CleanLog> clean(const Table& table,
                                 const std::vector<CleanOp>& ops) {
  Table out = table;
  CleanLog log;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const CleanOp& op = ops[i];
    CleanLog::Entry entry{i, 0, 0};
    switch (op.kind) {
      case CleanOp::Trim:
        for (auto& row : out.rows)
          for (auto& cell : row)
            if (cell) cell = trim_string(*cell);
        break;
      case CleanOp::Lowercase: {
        std::size_t c = require_column(out, op.column);
        for (auto& row : out.rows)
          if (row[c]) {
            std::string v = *row[c];
            std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) {
              return static_cast<char>(std::tolower(ch));
            });
            row[c] = v;
          }
        break;
      }
      case CleanOp::Replace: {
        std::size_t c = require_column(out, op.column);
        for (auto& row : out.rows) {
          if (!row[c] || op.from.empty()) continue;
          std::string v = *row[c];
          std::size_t pos = 0;
          while ((pos = v.find(op.from, pos)) != std::string::npos) {
            v.replace(pos, op.from.size(), op.to);
            pos += op.to.size();
          }
          row[c] = v;
        }
        break;
      }
      case CleanOp::Cast: {
        std::size_t c = require_column(out, op.column);
        for (auto& row : out.rows) {
          if (!row[c]) continue;
          if (!cell_parses_as(*row[c], op.type)) {
            row[c] = std::nullopt;
            ++entry.cast_failures;
          }
        }
        out.columns[c].declared_type = op.type;
        break;
      }
      case CleanOp::DropRowsWhereNull: {
        std::vector<std::size_t> idx;
        for (const auto& name : op.columns)
          idx.push_back(require_column(out, name));
        std::vector<std::vector<Cell>> kept;
        for (auto& row : out.rows) {
          bool has_null = false;
          for (std::size_t c : idx)
            if (!row[c]) {
              has_null = true;
              break;
            }
          if (has_null)
            ++entry.rows_dropped;
          else
            kept.push_back(std::move(row));
        }
        out.rows = std::move(kept);
        break;
      }
    }
    log.entries.push_back(entry);
  }
  return {out, log};
}

}  // namespace kgf::prep
