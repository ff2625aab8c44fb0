#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgf {

/// Syntax error in any of the textual inputs (RDF, queries, mappings,
/// backlogs). Line and column are 1-based.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// A query uses syntax we recognize but deliberately do not implement.
class unsupported_feature : public std::runtime_error {
 public:
  explicit unsupported_feature(const std::string& feature)
      : std::runtime_error("unsupported feature: " + feature),
        feature_(feature) {}

  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

/// Configuration or input-contract problem (bad manifest, missing column...).
class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kgf
