#include "kgf/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "kgf/error.hpp"
#include "kgf/infer/rules.hpp"
#include "kgf/onto/conformance.hpp"
#include "kgf/onto/vocabulary.hpp"
#include "kgf/rdf/serialize.hpp"
#include "kgf/rdf/syntax.hpp"
#include "kgf/rdf/turtle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace kgf::pipeline {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file: " + path);
  out << content;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string table_to_csv(const prep::Table& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << csv_field(table.columns[i].name);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i]) out << csv_field(*row[i]);
    }
    out << "\r\n";
  }
  return out.str();
}

std::string artifact_extension(rdf::Format format) {
  switch (format) {
    case rdf::Format::Turtle:   return ".ttl";
    case rdf::Format::NTriples: return ".nt";
    case rdf::Format::NQuads:   return ".nq";
  }
  return ".nq";
}

std::optional<shacl::Expectation> as_constraint_expectation(
    cq::Expectation e) {
  switch (e) {
    case cq::Expectation::Nonempty: return shacl::Expectation::Nonempty;
    case cq::Expectation::Empty:    return shacl::Expectation::Empty;
    case cq::Expectation::AskTrue:  return shacl::Expectation::AskTrue;
    case cq::Expectation::AskFalse: return shacl::Expectation::AskFalse;
    case cq::Expectation::Manual:   return std::nullopt;
  }
  return std::nullopt;
}

json mapping_log_to_json(const map::MappingLog& log) {
  json skipped = json::array();
  for (const auto& s : log.skipped_statements)
    skipped.push_back({{"rule", s.rule},
                       {"row", s.row},
                       {"column", s.column},
                       {"reason", s.reason}});
  return {{"rows_processed", log.rows_processed},
          {"rows_filtered", log.rows_filtered},
          {"triples_emitted", log.triples_emitted},
          {"duplicates_collapsed", log.duplicates_collapsed},
          {"skipped_statements", skipped}};
}

json integrity_to_json(const std::vector<map::IntegrityResult>& results) {
  json arr = json::array();
  for (const auto& r : results)
    arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  return arr;
}

/// Runs one stage with timing; a thrown exception becomes the stage error.
struct StageRunner {
  std::vector<StageResult>& stages;

  template <typename Fn>
  bool run(const std::string& name, Fn&& fn) {
    StageResult result;
    result.name = name;
    auto start = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.error = e.what();
    }
    auto end = std::chrono::steady_clock::now();
    result.millis =
        std::chrono::duration<double, std::milli>(end - start).count();
    stages.push_back(result);
    return result.ok;
  }

  void skip(const std::string& name, const std::string& reason) {
    StageResult result;
    result.name = name;
    result.ok = false;
    result.error = "skipped: " + reason;
    stages.push_back(result);
  }
};

void finalize(IterationReport& report) {
  bool stage_failed = false;
  bool quality_ran = false;
  for (const auto& stage : report.stages) {
    if (!stage.ok) stage_failed = true;
    if (stage.name == "quality" && stage.ok) quality_ran = true;
  }
  bool quality_failed =
      quality_ran && quality::overall_status(report.quality) == "fail";
  report.overall = (stage_failed || quality_failed) ? "fail" : "pass";
  write_report(report);
}

}  // namespace

IterationReport run_iteration(const ProjectManifest& manifest, Stage up_to,
                              const std::string& timestamp) {
  IterationReport report;
  report.project_name = manifest.project_name;
  report.iteration_label = manifest.iteration_label;
  report.artifact_dir =
      (fs::path(manifest.output_dir) / manifest.iteration_label).string();
  fs::create_directories(report.artifact_dir);

  StageRunner runner{report.stages};
  std::map<std::string, prep::Table> tables;
  rdf::Graph ontology_graph;
  onto::Vocabulary vocabulary;
  rdf::Graph data_graph;
  store::TripleStore store;
  std::vector<cq::CompetencyQuestion> backlog;
  bool backlog_loaded = false;
  bool data_ok = false;
  bool onto_ok = false;
  bool graph_ok = false;

  auto ensure_backlog = [&] {
    if (!backlog_loaded && manifest.backlog_path) {
      backlog = cq::load_backlog(*manifest.backlog_path);
      backlog_loaded = true;
    }
  };
  auto artifact = [&](const std::string& rel) {
    return (fs::path(report.artifact_dir) / rel).string();
  };

  data_ok = runner.run("profile", [&] {
    for (const auto& source : manifest.data_sources) {
      prep::Table table = prep::ingest_csv(source.path, source.options,
                                           source.name);
      for (const auto& [column, type] : source.column_types) {
        auto index = table.column_index(column);
        if (!index)
          throw config_error("data source '" + source.name +
                             "': declared type for unknown column '" + column +
                             "'");
        table.columns[*index].declared_type = type;
      }
      report.profiles.push_back(prep::profile(table));
      write_file(artifact("profiles/" + source.name + ".json"),
                 prep::profile_to_json(report.profiles.back()));
      tables.emplace(source.name, std::move(table));
    }
  });
  if (up_to < Stage::Prep) { finalize(report); return report; }

  if (data_ok) {
    data_ok = runner.run("prep", [&] {
      for (const auto& step : manifest.clean_steps) {
        auto it = tables.find(step.table);
        if (it == tables.end())
          throw config_error("clean step references unknown table '" +
                             step.table + "'");
        it->second = prep::clean(it->second, {step.op}).first;
      }
      for (const auto& step : manifest.join_steps) {
        prep::Table joined = prep::denormalize(tables, step.spec);
        joined.name = step.name;
        tables[step.name] = std::move(joined);
      }
      for (const auto& [name, table] : tables)
        write_file(artifact("prepared/" + name + ".csv"), table_to_csv(table));
    });
  } else {
    runner.skip("prep", "data ingestion failed");
  }
  if (up_to < Stage::Map) { finalize(report); return report; }

  onto_ok = runner.run("lint", [&] {
    ontology_graph = rdf::parse_turtle(read_file(manifest.ontology_path));
    vocabulary = onto::extract_vocabulary(ontology_graph);
    report.lint_findings = onto::lint(vocabulary);
  });

  if (data_ok) {
    graph_ok = runner.run("map", [&] {
      map::MappingLog& log = report.mapping_log;
      for (const auto& path : manifest.mapping_paths) {
        map::MappingPlan plan = map::compile_mapping(read_file(path));
        if (onto_ok) {
          auto findings = onto::check_mapping_conformance(plan, vocabulary);
          report.lint_findings.insert(report.lint_findings.end(),
                                      findings.begin(), findings.end());
        }
        auto [graph, plan_log] = map::apply_mapping(plan, tables);
        data_graph.merge(graph);
        log.rows_processed += plan_log.rows_processed;
        log.rows_filtered += plan_log.rows_filtered;
        log.triples_emitted += plan_log.triples_emitted;
        log.skipped_statements.insert(log.skipped_statements.end(),
                                      plan_log.skipped_statements.begin(),
                                      plan_log.skipped_statements.end());
      }
      log.duplicates_collapsed = log.triples_emitted - data_graph.size();
      report.graph_artifact =
          artifact("graph" + artifact_extension(manifest.serialization));
      write_file(report.graph_artifact,
                 rdf::serialize(data_graph, manifest.serialization));
      write_file(artifact("mapping_log.json"), mapping_log_to_json(log).dump(2) + "\n");
    });
  } else {
    runner.skip("map", "data preparation failed");
  }
  std::sort(report.lint_findings.begin(), report.lint_findings.end());
  write_file(artifact("lint.json"),
             onto::lint_report_json(report.lint_findings));
  write_file(artifact("lint.txt"), onto::lint_report_text(report.lint_findings));
  if (up_to < Stage::Integrity) { finalize(report); return report; }

  if (graph_ok) {
    runner.run("integrity", [&] {
      std::vector<map::IntegrityQuery> queries;
      for (const auto& spec : manifest.integrity_queries)
        queries.push_back({spec.name, read_file(spec.path), spec.expect_empty});
      rdf::Graph combined = ontology_graph;
      combined.merge(data_graph);
      report.integrity = map::run_integrity_queries(combined, queries);
      write_file(artifact("integrity.json"),
                 integrity_to_json(report.integrity).dump(2) + "\n");
    });
  } else {
    runner.skip("integrity", "mapping failed");
  }
  if (up_to < Stage::Quality) { finalize(report); return report; }

  runner.run("quality", [&] {
    store.import(ontology_graph);
    store.import(data_graph);
    std::vector<quality::RdfInput> inputs;
    inputs.push_back({manifest.ontology_path, rdf::Format::Turtle});
    std::vector<shacl::Shape> shapes;
    if (manifest.shapes_path) {
      inputs.push_back({*manifest.shapes_path, rdf::Format::Turtle});
      try {
        shapes = shacl::parse_shapes(rdf::parse_turtle(read_file(*manifest.shapes_path)));
      } catch (const parse_error&) {
        // the syntax failure is already reported at level 1
      }
    }
    if (graph_ok)
      inputs.push_back({report.graph_artifact, manifest.serialization});
    std::vector<shacl::QueryConstraint> constraints;
    ensure_backlog();
    for (const auto& question : backlog) {
      if (question.kind != cq::Kind::Cq) continue;
      for (const auto& sub : question.sub_questions) {
        auto expectation = as_constraint_expectation(sub.expectation);
        if (sub.query && expectation)
          constraints.push_back(
              shacl::wrap_cq_as_constraint(sub.id, *sub.query, *expectation));
      }
    }
    quality::ExternalEvidence evidence;
    std::size_t faultlessness = 0;
    for (const auto& profile : report.profiles)
      faultlessness += profile.entry("faultlessness").findings.size();
    evidence.faultlessness_findings = faultlessness;
    report.quality = quality::run_quality_checks(
        inputs, store, manifest.ruleset, shapes, constraints, evidence);
    write_file(artifact("quality.json"), quality::quality_report_json(report.quality));
    write_file(artifact("quality.md"), quality::quality_report_markdown(report.quality));
  });
  report.triple_count = store.size();
  if (up_to < Stage::Evaluate) { finalize(report); return report; }

  if (manifest.backlog_path) {
    runner.run("evaluate", [&] {
      ensure_backlog();
      report.evaluation = cq::evaluate_backlog(backlog, store,
                                               manifest.iteration_label,
                                               timestamp);
      write_file(artifact("evaluation.csv"),
                 cq::render_table(report.evaluation, cq::TableFormat::Csv));
      write_file(artifact("evaluation.md"),
                 cq::render_table(report.evaluation, cq::TableFormat::Markdown));
      write_file(artifact("evaluation.json"),
                 cq::render_table(report.evaluation, cq::TableFormat::Json));
    });
  }

  finalize(report);
  return report;
}

std::string report_to_json(const IterationReport& report) {
  ReportSummary summary = summarize(report);

  json stages = json::array();
  for (const auto& s : report.stages)
    stages.push_back({{"name", s.name},
                      {"ok", s.ok},
                      {"error", s.error},
                      {"millis", s.millis}});

  json profiles = json::object();
  for (const auto& p : report.profiles)
    profiles[p.table] = json::parse(prep::profile_to_json(p));

  json evaluation = report.evaluation.rows.empty() &&
                            report.evaluation.iteration_label.empty()
                        ? json(nullptr)
                        : json::parse(cq::render_table(report.evaluation,
                                                       cq::TableFormat::Json));

  json violations = json::array();
  for (const auto& v : summary.violations) violations.push_back(v);
  json ratings = json::object();
  for (const auto& [id, rating] : summary.ratings) ratings[id] = rating;

  json doc = {
      {"project_name", report.project_name},
      {"iteration_label", report.iteration_label},
      {"artifact_dir", report.artifact_dir},
      {"stages", stages},
      {"profiles", profiles},
      {"lint", json::parse(onto::lint_report_json(report.lint_findings))},
      {"mapping_log", mapping_log_to_json(report.mapping_log)},
      {"triple_count", report.triple_count},
      {"graph_artifact", report.graph_artifact},
      {"integrity", integrity_to_json(report.integrity)},
      {"quality",
       report.quality.dimensions.empty()
           ? json(nullptr)
           : json::parse(quality::quality_report_json(report.quality))},
      {"evaluation", evaluation},
      {"overall", report.overall},
      {"summary",
       {{"iteration_label", summary.iteration_label},
        {"fulfillment_rate", summary.fulfillment_rate},
        {"ratings", ratings},
        {"triple_count", summary.triple_count},
        {"violations", violations}}},
  };
  return doc.dump(2) + "\n";
}

void write_report(const IterationReport& report) {
  write_file((fs::path(report.artifact_dir) / "report.json").string(),
             report_to_json(report));
}

ReportSummary summarize(const IterationReport& report) {
  ReportSummary summary;
  summary.iteration_label = report.iteration_label;
  summary.fulfillment_rate = report.evaluation.fulfillment_rate;
  summary.triple_count = report.triple_count;
  for (const auto& row : report.evaluation.rows)
    summary.ratings[row.sub_question_id] = row.rating;
  for (const auto& [path, syntax] : report.quality.level1)
    for (const auto& e : syntax.errors)
      summary.violations.insert("level1 " + path + " line " +
                                std::to_string(e.line) + ", col " +
                                std::to_string(e.column) + ": " + e.message);
  for (const auto& v : report.quality.level2.violations)
    summary.violations.insert("level2 " + v.rule_name + ": " + v.message);
  for (const auto& v : report.quality.level3_shapes.violations)
    summary.violations.insert("level3 " + v.shape + " " + v.constraint + " " +
                              rdf::term_to_string(v.focus_node));
  for (const auto& v : report.quality.level3_queries.violations)
    summary.violations.insert("level3 " + v.shape + " " + v.constraint + " " +
                              rdf::term_to_string(v.focus_node));
  return summary;
}

ReportSummary load_summary(const std::string& report_json_path) {
  json doc;
  try {
    doc = json::parse(read_file(report_json_path));
  } catch (const json::parse_error& e) {
    throw config_error("invalid report JSON in " + report_json_path + ": " +
                       e.what());
  }
  if (!doc.is_object() || !doc.contains("summary") ||
      !doc["summary"].is_object())
    throw config_error("no summary section in " + report_json_path);
  const json& s = doc["summary"];
  ReportSummary summary;
  summary.iteration_label = s.value("iteration_label", "");
  summary.fulfillment_rate = s.value("fulfillment_rate", 0.0);
  summary.triple_count = s.value("triple_count", std::size_t{0});
  if (s.contains("ratings"))
    for (auto it = s["ratings"].begin(); it != s["ratings"].end(); ++it)
      summary.ratings[it.key()] = it.value().get<std::string>();
  if (s.contains("violations"))
    for (const auto& v : s["violations"])
      summary.violations.insert(v.get<std::string>());
  return summary;
}

IterationDiff diff_iterations(const ReportSummary& a, const ReportSummary& b) {
  IterationDiff diff;
  diff.fulfillment_rate_delta = b.fulfillment_rate - a.fulfillment_rate;
  diff.triple_count_delta = static_cast<long long>(b.triple_count) -
                            static_cast<long long>(a.triple_count);
  for (const auto& [id, rating] : b.ratings) {
    auto it = a.ratings.find(id);
    std::string before = it == a.ratings.end() ? "" : it->second;
    if (rating == "pass" && before != "pass") diff.newly_passing.push_back(id);
    if (rating != "pass" && before == "pass") diff.newly_failing.push_back(id);
  }
  for (const auto& [id, rating] : a.ratings)
    if (rating == "pass" && !b.ratings.count(id))
      diff.newly_failing.push_back(id);
  std::sort(diff.newly_failing.begin(), diff.newly_failing.end());
  for (const auto& v : b.violations)
    if (!a.violations.count(v)) diff.new_violations.push_back(v);
  for (const auto& v : a.violations)
    if (!b.violations.count(v)) diff.resolved_violations.push_back(v);
  return diff;
}

std::string diff_to_text(const IterationDiff& diff) {
  if (diff.empty()) return "no differences\n";
  std::ostringstream out;
  out.setf(std::ios::showpos);
  out << "fulfillment rate: " << diff.fulfillment_rate_delta << "\n";
  out << "triples: " << diff.triple_count_delta << "\n";
  out.unsetf(std::ios::showpos);
  auto list = [&](const char* title, const std::vector<std::string>& items) {
    if (items.empty()) return;
    out << title << ":\n";
    for (const auto& item : items) out << "  " << item << "\n";
  };
  list("newly passing", diff.newly_passing);
  list("newly failing", diff.newly_failing);
  list("new violations", diff.new_violations);
  list("resolved violations", diff.resolved_violations);
  return out.str();
}

}  // namespace kgf::pipeline
