#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgf/rdf/graph.hpp"
#include "kgf/store/store.hpp"

namespace kgf::shacl {

enum class NodeKind { Iri, Literal, Blank };

struct PropertyConstraint {
  std::string path;     // predicate IRI
  bool inverse = false; // values are subjects of the path instead of objects
  std::optional<std::size_t> min_count;
  std::optional<std::size_t> max_count;
  std::optional<std::string> datatype;
  std::optional<std::string> class_iri;
  std::optional<NodeKind> node_kind;
  std::optional<std::string> pattern;
  std::optional<std::vector<rdf::Term>> in_list;
  std::optional<double> min_inclusive;
  std::optional<double> max_inclusive;
};

struct NodeConstraint {
  std::optional<NodeKind> node_kind;
  std::optional<std::string> class_iri;
  std::optional<std::vector<rdf::Term>> in_list;
};

struct Shape {
  std::string id;  // IRI or blank label of the shape node
  std::optional<std::string> target_class;
  std::vector<rdf::Term> target_nodes;
  std::optional<std::string> target_subjects_of;
  std::vector<PropertyConstraint> constraints;
  NodeConstraint node_constraint;
};

struct Violation {
  std::string shape;
  rdf::Term focus_node;
  std::string constraint;  // component name, e.g. "minCount"
  std::optional<rdf::Term> value;
  std::string message;

  auto operator<=>(const Violation&) const = default;
};

struct ValidationReport {
  bool conforms = true;
  std::vector<Violation> violations;
};

/// Reads shapes from a Turtle-style shapes graph using the standard shapes
/// vocabulary subset: targets (targetClass, targetNode, targetSubjectsOf),
/// property constraints (path with optional inversePath, minCount, maxCount,
/// datatype, class, nodeKind, pattern, in, minInclusive, maxInclusive) and
/// node constraints (nodeKind, class, in). Unknown shape-vocabulary
/// parameters raise unsupported_feature; a shape without any target is a
/// config_error.
std::vector<Shape> parse_shapes(const rdf::Graph& shapes_graph);

/// Validates the store's default graph against the shapes. Violations are
/// sorted by (shape, focus_node, constraint) and deduplicated.
ValidationReport validate(const store::TripleStore& store,
                          const std::vector<Shape>& shapes);

enum class Expectation { AskTrue, AskFalse, Nonempty, Empty };

std::optional<Expectation> expectation_from_name(const std::string& name);
std::string expectation_name(Expectation e);

struct QueryConstraint {
  std::string name;
  std::string query;
  Expectation expectation = Expectation::AskTrue;
};

/// Parse-validates the query text now so running the constraint later cannot
/// fail with a syntax error.
QueryConstraint wrap_cq_as_constraint(const std::string& cq_id,
                                      const std::string& query_text,
                                      Expectation expectation);

/// One pass/fail entry per constraint; a failed expectation becomes a
/// violation under the constraint's name.
ValidationReport run_query_constraints(
    const store::TripleStore& store,
    const std::vector<QueryConstraint>& constraints);

std::string report_to_json(const ValidationReport& report);
std::string report_to_markdown(const ValidationReport& report);

}  // namespace kgf::shacl
