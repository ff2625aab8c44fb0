#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kgf/rdf/graph.hpp"

namespace kgf::onto {

/// Schema-level vocabulary extracted from an ontology graph: classes,
/// property declarations, hierarchy edges, domains/ranges, labels,
/// disjointness.
struct Vocabulary {
  std::set<std::string> classes;
  std::set<std::string> object_properties;
  std::set<std::string> datatype_properties;
  std::set<std::string> untyped_properties;  // used as property, undeclared kind
  std::set<std::pair<std::string, std::string>> subclass_edges;  // (sub, super)
  std::map<std::string, std::set<std::string>> domains;
  std::map<std::string, std::set<std::string>> ranges;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>>
      labels;  // IRI -> (label, lang)
  std::set<std::pair<std::string, std::string>> disjoint_pairs;

  bool is_declared_property(const std::string& iri) const {
    return object_properties.count(iri) || datatype_properties.count(iri) ||
           untyped_properties.count(iri);
  }
};

/// Collects declarations from rdf:type of owl:Class / rdfs:Class,
/// owl:ObjectProperty, owl:DatatypeProperty, rdf:Property, plus
/// rdfs:subClassOf, rdfs:domain, rdfs:range, rdfs:label, owl:disjointWith.
Vocabulary extract_vocabulary(const rdf::Graph& graph);

}  // namespace kgf::onto
