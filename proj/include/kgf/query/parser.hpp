#pragma once

#include <string>

#include "kgf/query/ast.hpp"

namespace kgf::query {

/// Parses a query in the supported SPARQL fragment (SELECT/ASK/CONSTRUCT,
/// BGP, OPTIONAL, UNION, FILTER, DISTINCT, ORDER BY, LIMIT/OFFSET, COUNT
/// with optional GROUP BY). Throws kgf::parse_error on syntax errors and
/// kgf::unsupported_feature for recognized-but-unsupported keywords.
Query parse_query(const std::string& text);

}  // namespace kgf::query
