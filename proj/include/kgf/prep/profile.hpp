#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kgf/prep/table.hpp"

namespace kgf::prep {

struct Finding {
  std::string column;
  std::string message;
  std::vector<std::size_t> row_indices;
};

/// One of the five data quality criteria. Scored entries carry a number in
/// [0,1]; judgment criteria are reported "manual" with findings only.
struct CriterionEntry {
  std::string criterion;
  std::optional<double> score;  // nullopt = "manual"
  std::vector<Finding> findings;
};

struct QualityProfile {
  std::string table;
  // exactly these five, in this order
  std::array<CriterionEntry, 5> criteria;

  const CriterionEntry& entry(const std::string& name) const;
};

/// Format classes used by the uniform_representation clustering, in fixed
/// evaluation order.
enum class FormatClass {
  IsoDate, DottedDate, SlashedDate, Integer, DecimalDot, DecimalComma,
  BooleanToken, Other
};
FormatClass classify_format(const std::string& value);
std::string format_class_name(FormatClass c);

QualityProfile profile(const Table& table);

std::string profile_to_json(const QualityProfile& p);
std::string profile_to_markdown(const QualityProfile& p);

}  // namespace kgf::prep
