#pragma once

#include <string>

#include "kgf/rdf/graph.hpp"

namespace kgf::rdf {

enum class Format { Turtle, NTriples, NQuads };

Format format_from_name(const std::string& name);
std::string format_name(Format f);

/// Single-term serialization in N-Triples syntax (also valid Turtle).
std::string term_to_string(const Term& t);

/// Blank nodes are renamed b0, b1, ... in first-seen order so that repeated
/// serializations of the same graph are byte-identical.
std::string serialize(const Graph& graph, Format format);
std::string serialize(const Dataset& dataset, Format format);

}  // namespace kgf::rdf
