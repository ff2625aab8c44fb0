#include "kgf/prep/join.hpp"

#include <unordered_map>

#include "kgf/error.hpp"

namespace kgf::prep {

Table denormalize(const std::map<std::string, Table>& tables,
                  const JoinSpec& spec) {
  auto lt = tables.find(spec.left_table);
  if (lt == tables.end())
    throw config_error("unknown table '" + spec.left_table + "'");
  auto rt = tables.find(spec.right_table);
  if (rt == tables.end())
    throw config_error("unknown table '" + spec.right_table + "'");
  const Table& left = lt->second;
  const Table& right = rt->second;

  auto lk = left.column_index(spec.left_key);
  if (!lk)
    throw config_error("table '" + spec.left_table + "' has no key column '" +
                       spec.left_key + "'");
  auto rk = right.column_index(spec.right_key);
  if (!rk)
    throw config_error("table '" + spec.right_table + "' has no key column '" +
                       spec.right_key + "'");

  Table out;
  out.name = left.name;
  out.columns = left.columns;
  for (const auto& col : right.columns) {
    Column c = col;
    if (spec.column_prefixing) c.name = spec.right_table + "." + c.name;
    out.columns.push_back(c);
  }

  // hash the right side by key value
  std::unordered_map<std::string, std::vector<std::size_t>> by_key;
  for (std::size_t r = 0; r < right.rows.size(); ++r)
    if (right.rows[r][*rk]) by_key[*right.rows[r][*rk]].push_back(r);

  for (const auto& lrow : left.rows) {
    const Cell& key = lrow[*lk];
    const std::vector<std::size_t>* matches = nullptr;
    if (key) {
      auto it = by_key.find(*key);
      if (it != by_key.end()) matches = &it->second;
    }
    if (matches) {
      for (std::size_t r : *matches) {
        std::vector<Cell> row = lrow;
        row.insert(row.end(), right.rows[r].begin(), right.rows[r].end());
        out.rows.push_back(std::move(row));
      }
    } else if (spec.kind == JoinSpec::Left) {
      std::vector<Cell> row = lrow;
      row.resize(out.columns.size());  // right side null
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace kgf::prep
