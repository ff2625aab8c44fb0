#pragma once

#include <vector>

#include "kgf/map/mapping.hpp"
#include "kgf/onto/lint.hpp"

namespace kgf::onto {

/// Cross-checks a mapping plan against the ontology vocabulary:
///   UNDECLARED-PREDICATE  warning  statement predicate not a declared property
///   UNDECLARED-CLASS      warning  rdf:type object not a declared class
///   KIND-MISMATCH         error    datatype property with an IRI/blank object
///                                  or object property with a literal object
/// Findings are deduplicated and sorted like lint output.
std::vector<LintFinding> check_mapping_conformance(const map::MappingPlan& plan,
                                                   const Vocabulary& vocab);

}  // namespace kgf::onto
