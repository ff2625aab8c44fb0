#pragma once

#include <string>

namespace kgf::rdf {

/// True if the string starts with scheme ":" (RFC 3986 scheme syntax).
bool is_absolute_iri(const std::string& iri);

/// RFC 3986 section 5 reference resolution against an absolute base.
std::string resolve_iri(const std::string& base, const std::string& reference);

}  // namespace kgf::rdf
