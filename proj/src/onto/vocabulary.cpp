#include "kgf/onto/vocabulary.hpp"

namespace kgf::onto {

namespace {

const std::string kType = std::string(rdf::ns::rdf) + "type";
const std::string kProperty = std::string(rdf::ns::rdf) + "Property";
const std::string kRdfsClass = std::string(rdf::ns::rdfs) + "Class";
const std::string kSubClassOf = std::string(rdf::ns::rdfs) + "subClassOf";
const std::string kDomain = std::string(rdf::ns::rdfs) + "domain";
const std::string kRange = std::string(rdf::ns::rdfs) + "range";
const std::string kLabel = std::string(rdf::ns::rdfs) + "label";
const std::string kOwlClass = std::string(rdf::ns::owl) + "Class";
const std::string kObjectProperty = std::string(rdf::ns::owl) + "ObjectProperty";
const std::string kDatatypeProperty =
    std::string(rdf::ns::owl) + "DatatypeProperty";
const std::string kDisjointWith = std::string(rdf::ns::owl) + "disjointWith";

}  // namespace

Vocabulary extract_vocabulary(const rdf::Graph& graph) {
  Vocabulary v;
  for (const auto& t : graph) {
    if (!t.subject.is_iri()) continue;
    const std::string& s = t.subject.value;
    const std::string& p = t.predicate.value;

    if (p == kType && t.object.is_iri()) {
      const std::string& o = t.object.value;
      if (o == kOwlClass || o == kRdfsClass)
        v.classes.insert(s);
      else if (o == kObjectProperty)
        v.object_properties.insert(s);
      else if (o == kDatatypeProperty)
        v.datatype_properties.insert(s);
      else if (o == kProperty)
        v.untyped_properties.insert(s);
    } else if (p == kSubClassOf && t.object.is_iri()) {
      v.subclass_edges.insert({s, t.object.value});
      v.classes.insert(s);
      v.classes.insert(t.object.value);
    } else if (p == kDomain && t.object.is_iri()) {
      v.domains[s].insert(t.object.value);
      v.untyped_properties.insert(s);
    } else if (p == kRange && t.object.is_iri()) {
      v.ranges[s].insert(t.object.value);
      v.untyped_properties.insert(s);
    } else if (p == kLabel && t.object.is_literal()) {
      v.labels[s].push_back({t.object.value, t.object.language});
    } else if (p == kDisjointWith && t.object.is_iri()) {
      v.disjoint_pairs.insert({s, t.object.value});
      v.disjoint_pairs.insert({t.object.value, s});
    }
  }
  // a property both object- and datatype-typed stays in both sets; lint
  // reports it as DUAL-PROPERTY-KIND
  for (const auto& p : v.object_properties) v.untyped_properties.erase(p);
  for (const auto& p : v.datatype_properties) v.untyped_properties.erase(p);
  return v;
}

}  // namespace kgf::onto
