#include "kgf/onto/conformance.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "kgf/rdf/term.hpp"

namespace kgf::onto {

namespace {

const std::string kRdfType = std::string(rdf::ns::rdf) + "type";

bool yields_literal(const map::TermTemplate& t) {
  return t.kind == map::TermTemplate::Kind::ColumnLiteral ||
         t.kind == map::TermTemplate::Kind::ConstantLiteral;
}

}  // namespace

std::vector<LintFinding> check_mapping_conformance(const map::MappingPlan& plan,
                                                   const Vocabulary& vocab) {
  std::set<LintFinding> findings;
  for (const auto& rule : plan.rules) {
    for (const auto& st : rule.statements) {
      if (st.predicate == kRdfType) {
        if (st.object.kind == map::TermTemplate::Kind::ConstantIri &&
            !vocab.classes.count(st.object.text)) {
          findings.insert({"UNDECLARED-CLASS", Severity::Warning,
                           st.object.text,
                           "type assertion uses a class not declared in the "
                           "ontology"});
        }
        continue;
      }
      if (!vocab.is_declared_property(st.predicate)) {
        findings.insert({"UNDECLARED-PREDICATE", Severity::Warning,
                         st.predicate,
                         "mapping uses a predicate not declared in the "
                         "ontology"});
        continue;
      }
      bool literal_object = yields_literal(st.object);
      if (vocab.datatype_properties.count(st.predicate) && !literal_object &&
          !vocab.object_properties.count(st.predicate)) {
        findings.insert({"KIND-MISMATCH", Severity::Error, st.predicate,
                         "datatype property is given an IRI or blank-node "
                         "object"});
      } else if (vocab.object_properties.count(st.predicate) &&
                 literal_object &&
                 !vocab.datatype_properties.count(st.predicate)) {
        findings.insert({"KIND-MISMATCH", Severity::Error, st.predicate,
                         "object property is given a literal object"});
      }
    }
  }
  std::vector<LintFinding> out(findings.begin(), findings.end());
  std::sort(out.begin(), out.end(),
            [](const LintFinding& a, const LintFinding& b) {
              return std::tie(a.severity, a.code, a.subject, a.message) <
                     std::tie(b.severity, b.code, b.subject, b.message);
            });
  return out;
}

}  // namespace kgf::onto
