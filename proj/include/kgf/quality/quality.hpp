#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgf/infer/rules.hpp"
#include "kgf/rdf/syntax.hpp"
#include "kgf/shacl/shapes.hpp"
#include "kgf/store/store.hpp"

namespace kgf::quality {

struct DimensionEntry {
  std::string status;  // measured | manual | n/a
  std::string evidence;
};

struct RdfInput {
  std::string path;
  rdf::Format format = rdf::Format::Turtle;
};

/// Optional measurements routed in from other stages; dimensions without a
/// measurement are reported as manual.
struct ExternalEvidence {
  std::optional<std::size_t> faultlessness_findings;  // from data profiling
  std::optional<double> cq_fulfillment_rate;          // from the CQ backlog
};

struct QualityReport {
  std::vector<std::pair<std::string, rdf::SyntaxReport>> level1;  // per input
  infer::ConsistencyReport level2;
  shacl::ValidationReport level3_shapes;
  shacl::ValidationReport level3_queries;
  std::map<std::string, DimensionEntry> dimensions;  // exactly the six names
};

/// The three-level check: level 1 re-parses every RDF input,
/// level 2 materializes and runs the consistency rules (mutating the store),
/// level 3 validates shapes and query constraints against the materialized
/// store. The six dimension rows (accuracy, completeness, consistency,
/// timeliness, trustworthiness, availability) are filled where measurable and
/// marked manual otherwise.
QualityReport run_quality_checks(
    const std::vector<RdfInput>& inputs, store::TripleStore& store,
    infer::Ruleset ruleset, const std::vector<shacl::Shape>& shapes,
    const std::vector<shacl::QueryConstraint>& query_constraints,
    const ExternalEvidence& evidence = {});

/// fail iff any level-1 error, level-2 violation, or level-3 violation.
std::string overall_status(const QualityReport& report);  // "pass" | "fail"

std::string quality_report_json(const QualityReport& report);
std::string quality_report_markdown(const QualityReport& report);

}  // namespace kgf::quality
