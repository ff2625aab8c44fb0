#pragma once

#include <optional>
#include <string>

#include "kgf/rdf/graph.hpp"

namespace kgf::rdf {

/// Parses a Turtle document. Prefixed names and relative IRIs are expanded;
/// blank node labels stay document-local. Throws kgf::parse_error with
/// 1-based line/column on malformed input.
Graph parse_turtle(const std::string& text,
                   const std::optional<std::string>& base = std::nullopt);

}  // namespace kgf::rdf
