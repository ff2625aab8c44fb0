#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kgf/rdf/serialize.hpp"

namespace kgf::rdf {

struct SyntaxError {
  std::size_t line = 1;
  std::size_t column = 1;
  std::string message;
};

struct SyntaxReport {
  bool ok = true;
  std::vector<SyntaxError> errors;
  std::size_t triple_count = 0;
};

/// Quality level 1: parse the file, report structured errors instead of
/// throwing. Only I/O failures throw.
SyntaxReport validate_syntax(const std::string& path, Format format);

SyntaxReport validate_syntax_text(const std::string& text, Format format);

}  // namespace kgf::rdf
