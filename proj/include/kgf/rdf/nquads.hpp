#pragma once

#include <string>

#include "kgf/rdf/graph.hpp"

namespace kgf::rdf {

/// Strict line-oriented N-Triples parsing (absolute IRIs only).
Graph parse_ntriples(const std::string& text);

/// N-Quads: a fourth term routes the triple into that named graph,
/// three terms go to the default graph.
Dataset parse_nquads(const std::string& text);

}  // namespace kgf::rdf
