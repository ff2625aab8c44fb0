#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgf/cq/backlog.hpp"
#include "kgf/map/mapping.hpp"
#include "kgf/onto/lint.hpp"
#include "kgf/pipeline/manifest.hpp"
#include "kgf/prep/profile.hpp"
#include "kgf/quality/quality.hpp"
#include "kgf/store/store.hpp"

namespace kgf::pipeline {

struct StageResult {
  std::string name;
  bool ok = true;
  std::string error;
  double millis = 0.0;
};

/// Which stage to stop after; Evaluate runs the full iteration.
enum class Stage { Profile, Prep, Map, Integrity, Quality, Evaluate };

struct IterationReport {
  std::string project_name;
  std::string iteration_label;
  std::string artifact_dir;  // output_dir/iteration_label
  std::vector<StageResult> stages;
  std::vector<prep::QualityProfile> profiles;
  std::vector<onto::LintFinding> lint_findings;  // lint + mapping conformance
  map::MappingLog mapping_log;
  std::size_t triple_count = 0;
  std::string graph_artifact;  // path of the serialized graph
  std::vector<map::IntegrityResult> integrity;
  quality::QualityReport quality;
  cq::EvaluationTable evaluation;
  std::string overall = "pass";  // fail iff quality fails or a stage errors
};

/// Runs the procedure-model stages in order — ingest+profile, clean+join,
/// ontology lint, mapping+serialize, import+integrity queries, three-level
/// quality checks, backlog evaluation — writing every artifact under
/// output_dir/iteration_label/. A failed stage records its error and skips
/// the dependent stages. `timestamp` is stamped into the evaluation table
/// (empty keeps artifacts byte-reproducible).
IterationReport run_iteration(const ProjectManifest& manifest,
                              Stage up_to = Stage::Evaluate,
                              const std::string& timestamp = "");

std::string report_to_json(const IterationReport& report);
void write_report(const IterationReport& report);

/// The slice of an iteration report needed for cross-iteration diffing;
/// reconstructable from a written report.json.
struct ReportSummary {
  std::string iteration_label;
  double fulfillment_rate = 0.0;
  std::map<std::string, std::string> ratings;  // sub_question_id -> rating
  std::size_t triple_count = 0;
  std::set<std::string> violations;  // quality violations, canonical strings
};

ReportSummary summarize(const IterationReport& report);
ReportSummary load_summary(const std::string& report_json_path);

struct IterationDiff {
  double fulfillment_rate_delta = 0.0;
  std::vector<std::string> newly_passing;
  std::vector<std::string> newly_failing;
  long long triple_count_delta = 0;
  std::vector<std::string> new_violations;
  std::vector<std::string> resolved_violations;

  bool empty() const {
    return fulfillment_rate_delta == 0.0 && newly_passing.empty() &&
           newly_failing.empty() && triple_count_delta == 0 &&
           new_violations.empty() && resolved_violations.empty();
  }
};

IterationDiff diff_iterations(const ReportSummary& a, const ReportSummary& b);
std::string diff_to_text(const IterationDiff& diff);

}  // namespace kgf::pipeline
