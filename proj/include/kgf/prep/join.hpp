#pragma once

#include <map>
#include <string>

#include "kgf/prep/table.hpp"

namespace kgf::prep {

struct JoinSpec {
  std::string left_table, right_table;
  std::string left_key, right_key;
  enum Kind { Inner, Left } kind = Inner;
  bool column_prefixing = true;
};

/// Denormalizing join. Inner drops unmatched left rows; left keeps them with
/// nulls on the right. With column_prefixing, right columns are renamed
/// "<right_table>.<name>". Null keys never match.
Table denormalize(const std::map<std::string, Table>& tables,
                  const JoinSpec& spec);

}  // namespace kgf::prep
