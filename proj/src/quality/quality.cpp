#include "kgf/quality/quality.hpp"

#include <sstream>

#include "json.hpp"

namespace kgf::quality {

namespace {

const char* kDimensions[] = {"accuracy",   "completeness",   "consistency",
                             "timeliness", "trustworthiness", "availability"};

std::string format_rate(double rate) {
  std::ostringstream os;
  os << rate;
  return os.str();
}

std::size_t min_count_violations(const shacl::ValidationReport& r) {
  std::size_t n = 0;
  for (const auto& v : r.violations)
    if (v.constraint == "minCount") ++n;
  return n;
}

}  // namespace

QualityReport run_quality_checks(
    const std::vector<RdfInput>& inputs, store::TripleStore& store,
    infer::Ruleset ruleset, const std::vector<shacl::Shape>& shapes,
    const std::vector<shacl::QueryConstraint>& query_constraints,
    const ExternalEvidence& evidence) {
  QualityReport report;

  for (const auto& input : inputs)
    report.level1.push_back(
        {input.path, rdf::validate_syntax(input.path, input.format)});

  report.level2 = infer::check_consistency(store, ruleset);

  report.level3_shapes = shacl::validate(store, shapes);
  report.level3_queries = shacl::run_query_constraints(store, query_constraints);

  // dimensions
  DimensionEntry consistency;
  consistency.status = "measured";
  consistency.evidence =
      report.level2.consistent
          ? "consistent under the selected ruleset"
          : std::to_string(report.level2.violations.size()) +
                " consistency violations";
  report.dimensions["consistency"] = consistency;

  DimensionEntry completeness;
  completeness.status = "measured";
  completeness.evidence = std::to_string(
                              min_count_violations(report.level3_shapes)) +
                          " minCount violations";
  if (evidence.cq_fulfillment_rate)
    completeness.evidence +=
        "; CQ fulfillment rate " + format_rate(*evidence.cq_fulfillment_rate);
  report.dimensions["completeness"] = completeness;

  DimensionEntry accuracy;
  if (evidence.faultlessness_findings) {
    accuracy.status = "measured";
    accuracy.evidence = std::to_string(*evidence.faultlessness_findings) +
                        " faultlessness findings from data profiling";
  } else {
    accuracy.status = "manual";
    accuracy.evidence = "no data-profiling evidence routed in";
  }
  report.dimensions["accuracy"] = accuracy;

  report.dimensions["timeliness"] = {
      "manual", "source update cadence must be judged by the project team"};
  report.dimensions["trustworthiness"] = {
      "manual", "source provenance must be judged by the project team"};
  report.dimensions["availability"] = {
      "manual", "depends on the deployment of the query endpoint"};
  return report;
}

std::string overall_status(const QualityReport& report) {
  for (const auto& [path, syntax] : report.level1)
    if (!syntax.ok) return "fail";
  if (!report.level2.consistent) return "fail";
  if (!report.level3_shapes.conforms) return "fail";
  if (!report.level3_queries.conforms) return "fail";
  return "pass";
}

std::string quality_report_json(const QualityReport& report) {
  nlohmann::json j;
  j["overall_status"] = overall_status(report);

  nlohmann::json level1 = nlohmann::json::array();
  for (const auto& [path, syntax] : report.level1) {
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& e : syntax.errors)
      errors.push_back(
          {{"line", e.line}, {"column", e.column}, {"message", e.message}});
    level1.push_back({{"path", path},
                      {"ok", syntax.ok},
                      {"triple_count", syntax.triple_count},
                      {"errors", errors}});
  }
  j["level1"] = level1;

  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.level2.violations)
    violations.push_back({{"rule", v.rule_name}, {"message", v.message}});
  j["level2"] = {{"consistent", report.level2.consistent},
                 {"entailed_triples_added", report.level2.entailed_triples_added},
                 {"violations", violations}};

  auto shape_violations = [](const shacl::ValidationReport& r) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : r.violations)
      arr.push_back({{"shape", v.shape},
                     {"focus_node", rdf::term_to_string(v.focus_node)},
                     {"constraint", v.constraint},
                     {"message", v.message}});
    return arr;
  };
  j["level3"] = {{"shapes",
                  {{"conforms", report.level3_shapes.conforms},
                   {"violations", shape_violations(report.level3_shapes)}}},
                 {"query_constraints",
                  {{"conforms", report.level3_queries.conforms},
                   {"violations", shape_violations(report.level3_queries)}}}};

  nlohmann::json dims;
  for (const char* name : kDimensions) {
    const auto& d = report.dimensions.at(name);
    dims[name] = {{"status", d.status}, {"evidence", d.evidence}};
  }
  j["dimensions"] = dims;
  return j.dump(2) + "\n";
}

std::string quality_report_markdown(const QualityReport& report) {
  std::string out = "# Quality report\n\nOverall status: **" +
                    overall_status(report) + "**\n\n## Level 1: syntax\n";
  for (const auto& [path, syntax] : report.level1) {
    out += "- " + path + ": " +
           (syntax.ok ? "ok (" + std::to_string(syntax.triple_count) +
                            " triples)"
                      : std::to_string(syntax.errors.size()) + " errors") +
           "\n";
  }
  out += "\n## Level 2: consistency\n";
  out += report.level2.consistent ? "consistent\n" : "";
  for (const auto& v : report.level2.violations)
    out += "- " + v.rule_name + ": " + v.message + "\n";
  out += "\n## Level 3: shapes and query constraints\n";
  out += std::string("shapes: ") +
         (report.level3_shapes.conforms ? "conforms" : "violations") +
         "; query constraints: " +
         (report.level3_queries.conforms ? "conforms" : "violations") + "\n";
  for (const auto& v : report.level3_shapes.violations)
    out += "- [" + v.shape + "] " + rdf::term_to_string(v.focus_node) + " " +
           v.constraint + ": " + v.message + "\n";
  for (const auto& v : report.level3_queries.violations)
    out += "- [" + v.shape + "] " + v.constraint + ": " + v.message + "\n";
  out += "\n## Dimensions\n\n| dimension | status | evidence |\n"
         "| --- | --- | --- |\n";
  for (const char* name : kDimensions) {
    const auto& d = report.dimensions.at(name);
    out += "| " + std::string(name) + " | " + d.status + " | " + d.evidence +
           " |\n";
  }
  return out;
}

}  // namespace kgf::quality
