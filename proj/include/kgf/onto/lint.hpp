#pragma once

#include <string>
#include <vector>

#include "kgf/onto/vocabulary.hpp"

namespace kgf::onto {

enum class Severity { Error, Warning, Info };

std::string severity_name(Severity s);

struct LintFinding {
  std::string code;
  Severity severity = Severity::Info;
  std::string subject;
  std::string message;

  auto operator<=>(const LintFinding&) const = default;
};

/// Evaluates the fixed pitfall catalogue over an extracted vocabulary:
///   CYCLE-SUBCLASS      error    class participates in a subclass cycle
///   DUAL-PROPERTY-KIND  error    property typed both object and datatype
///   DISJOINT-SUBCLASS   error    class is a subclass of two disjoint classes
///   MISSING-DOMAIN      warning  property lacks rdfs:domain
///   MISSING-RANGE       warning  property lacks rdfs:range
///   MISSING-LABEL       info     class or property lacks rdfs:label
///   ORPHAN-CLASS        info     class unused by any property or subclass edge
/// Findings are sorted by (severity, code, subject) for stable output.
std::vector<LintFinding> lint(const Vocabulary& vocab);

/// Report renderers for the CLI: machine-readable JSON and plain text.
std::string lint_report_json(const std::vector<LintFinding>& findings);
std::string lint_report_text(const std::vector<LintFinding>& findings);

}  // namespace kgf::onto
