#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

#include "kgf/error.hpp"
#include "kgf/pipeline/endpoint.hpp"
#include "kgf/pipeline/manifest.hpp"
#include "kgf/pipeline/pipeline.hpp"
#include "kgf/query/parser.hpp"
#include "kgf/query/results.hpp"
#include "kgf/rdf/nquads.hpp"
#include "kgf/rdf/turtle.hpp"

using namespace kgf;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

/// Copies the bundled demo project into a scratch directory so tests can
/// mutate it freely.
std::string fresh_demo(const std::string& tag) {
  fs::path src = fs::path(KGF_FIXTURE_DIR) / "demo";
  fs::path dst = fs::temp_directory_path() / ("kgf_pipeline_" + tag);
  fs::remove_all(dst);
  fs::copy(src, dst, fs::copy_options::recursive);
  return dst.string();
}

}  // namespace

TEST_CASE("manifest parsing applies defaults and resolves paths") {
  std::string dir = fresh_demo("manifest_defaults");
  auto m = pipeline::load_manifest(dir + "/manifest.json");
  CHECK(m.project_name == "demo-plant");
  CHECK(m.iteration_label == "iteration-1");
  CHECK(m.data_sources.size() == 3);
  CHECK(fs::path(m.data_sources[0].path).is_absolute() ==
        fs::path(dir).is_absolute());
  CHECK(fs::exists(m.ontology_path));
  CHECK(m.mapping_paths.size() == 3);
  CHECK(m.ruleset == infer::Ruleset::Default);
  CHECK(m.serialization == rdf::Format::NQuads);
  CHECK(m.join_steps.size() == 1);
  CHECK(m.join_steps[0].spec.kind == prep::JoinSpec::Inner);
  CHECK(m.integrity_queries.size() == 3);
  CHECK(m.integrity_queries[1].expect_empty);
}

TEST_CASE("manifest validation errors name the problem") {
  std::string dir = fresh_demo("manifest_errors");

  SUBCASE("invalid JSON") {
    CHECK_THROWS_AS(pipeline::parse_manifest("{ nope", dir), config_error);
  }
  SUBCASE("missing data source path") {
    std::string text = read_file(dir + "/manifest.json");
    auto j = json::parse(text);
    j["data_sources"][0]["path"] = "data/DOES_NOT_EXIST.csv";
    try {
      pipeline::parse_manifest(j.dump(), dir);
      FAIL("expected config_error");
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("DOES_NOT_EXIST.csv") !=
            std::string::npos);
    }
  }
  SUBCASE("duplicate data source name") {
    auto j = json::parse(read_file(dir + "/manifest.json"));
    j["data_sources"][1]["name"] = "machines";
    CHECK_THROWS_WITH_AS(pipeline::parse_manifest(j.dump(), dir),
                         doctest::Contains("duplicate data source"),
                         config_error);
  }
  SUBCASE("zero mappings rejected") {
    auto j = json::parse(read_file(dir + "/manifest.json"));
    j["mappings"] = json::array();
    CHECK_THROWS_WITH_AS(pipeline::parse_manifest(j.dump(), dir),
                         doctest::Contains("mapping"), config_error);
  }
  SUBCASE("unknown ruleset") {
    auto j = json::parse(read_file(dir + "/manifest.json"));
    j["ruleset"] = "turbo";
    CHECK_THROWS_AS(pipeline::parse_manifest(j.dump(), dir), config_error);
  }
  SUBCASE("unknown serialization") {
    auto j = json::parse(read_file(dir + "/manifest.json"));
    j["serialization"] = "rdfxml";
    CHECK_THROWS_AS(pipeline::parse_manifest(j.dump(), dir), config_error);
  }
  SUBCASE("unknown join kind") {
    auto j = json::parse(read_file(dir + "/manifest.json"));
    j["prep"]["joins"][0]["kind"] = "outer";
    CHECK_THROWS_AS(pipeline::parse_manifest(j.dump(), dir), config_error);
  }
}

TEST_CASE("run_iteration on the demo project") {
  std::string dir = fresh_demo("run");
  auto m = pipeline::load_manifest(dir + "/manifest.json");
  auto report = pipeline::run_iteration(m);

  CHECK(report.overall == "pass");
  for (const auto& stage : report.stages) {
    INFO(stage.name, ": ", stage.error);
    CHECK(stage.ok);
  }
  CHECK(report.stages.size() == 7);

  // Counter oracle, hand-derived from the CSV contents: 6 machine rows x 2
  // rules + 8 order rows x 3 rules + 10 measurement rows.
  CHECK(report.mapping_log.rows_processed == 46);
  CHECK(report.mapping_log.skipped_statements.size() == 1);
  CHECK(report.mapping_log.skipped_statements[0].column == "status");
  // 3 duplicate site triples + 4 duplicate product triples collapse.
  CHECK(report.mapping_log.duplicates_collapsed == 7);
  CHECK(report.mapping_log.triples_emitted -
            report.mapping_log.duplicates_collapsed ==
        142);

  // Independent re-count of the serialized artifact.
  rdf::Dataset dataset = rdf::parse_nquads(read_file(report.graph_artifact));
  CHECK(dataset.default_graph().size() == 142);

  CHECK(report.lint_findings.empty());
  for (const auto& r : report.integrity) CHECK(r.passed);
  CHECK(report.evaluation.fulfillment_rate == doctest::Approx(0.875));
  CHECK(quality::overall_status(report.quality) == "pass");

  // Every expected artifact lands under output_dir/iteration_label.
  for (const char* artifact :
       {"profiles/machines.json", "profiles/orders.json",
        "profiles/measurements.json", "prepared/machines.csv",
        "prepared/orders_full.csv", "lint.json", "lint.txt", "graph.nq",
        "mapping_log.json", "integrity.json", "quality.json", "quality.md",
        "evaluation.csv", "evaluation.md", "evaluation.json", "report.json"}) {
    INFO(artifact);
    CHECK(fs::exists(fs::path(report.artifact_dir) / artifact));
  }

  // The golden table frozen with the fixture.
  CHECK(read_file(report.artifact_dir + "/evaluation.csv") ==
        read_file(dir + "/expected/evaluation.csv"));
}

TEST_CASE("reruns produce byte-identical graph artifacts") {
  std::string dir = fresh_demo("repro");
  auto m = pipeline::load_manifest(dir + "/manifest.json");
  auto r1 = pipeline::run_iteration(m);
  std::string g1 = read_file(r1.graph_artifact);
  std::string rep1 = read_file(r1.artifact_dir + "/report.json");
  auto r2 = pipeline::run_iteration(m);
  CHECK(g1 == read_file(r2.graph_artifact));
  // report.json differs only in stage timings; compare with millis zeroed
  auto strip = [](const std::string& text) {
    auto j = json::parse(text);
    for (auto& s : j["stages"]) s["millis"] = 0;
    return j.dump();
  };
  CHECK(strip(rep1) == strip(read_file(r2.artifact_dir + "/report.json")));
}

TEST_CASE("stage gating: broken upstream skips dependents, quality still runs") {
  std::string dir = fresh_demo("gating");
  // Corrupt the ontology: the lint stage errors, mapping conformance is
  // skipped, but quality level 1 still reports the located syntax error.
  write_file(dir + "/ontology.ttl", "@prefix ex: <http://example.org/> .\nex:Broken a\n");
  auto m = pipeline::load_manifest(dir + "/manifest.json");
  auto report = pipeline::run_iteration(m);
  CHECK(report.overall == "fail");
  bool lint_failed = false, map_ok = false, quality_ok = false;
  for (const auto& stage : report.stages) {
    if (stage.name == "lint") lint_failed = !stage.ok;
    if (stage.name == "map") map_ok = stage.ok;
    if (stage.name == "quality") quality_ok = stage.ok;
  }
  CHECK(lint_failed);
  CHECK(map_ok);      // mapping does not depend on the ontology
  CHECK(quality_ok);  // quality runs and reports the syntax failure
  bool level1_failed = false;
  for (const auto& [path, syntax] : report.quality.level1)
    if (!syntax.ok) level1_failed = true;
  CHECK(level1_failed);
}

TEST_CASE("run_iteration honours the up_to stage bound") {
  std::string dir = fresh_demo("up_to");
  auto m = pipeline::load_manifest(dir + "/manifest.json");
  auto report = pipeline::run_iteration(m, pipeline::Stage::Prep);
  CHECK(report.stages.size() == 2);
  CHECK(fs::exists(fs::path(report.artifact_dir) / "prepared/machines.csv"));
  CHECK_FALSE(fs::exists(fs::path(report.artifact_dir) / "graph.nq"));
  CHECK(fs::exists(fs::path(report.artifact_dir) / "report.json"));
}

TEST_CASE("summaries and diffs") {
  std::string dir = fresh_demo("diff");
  auto m = pipeline::load_manifest(dir + "/manifest.json");
  auto r1 = pipeline::run_iteration(m);
  auto s1 = pipeline::summarize(r1);
  CHECK(s1.fulfillment_rate == doctest::Approx(0.875));
  CHECK(s1.triple_count == r1.triple_count);
  CHECK(s1.ratings.at("CQ-1.1") == "pass");
  CHECK(s1.ratings.at("CQ-6.1") == "not_feasible");

  // load_summary reads back exactly what summarize computed
  auto loaded = pipeline::load_summary(r1.artifact_dir + "/report.json");
  CHECK(loaded.fulfillment_rate == s1.fulfillment_rate);
  CHECK(loaded.ratings == s1.ratings);
  CHECK(loaded.triple_count == s1.triple_count);
  CHECK(loaded.violations == s1.violations);

  SUBCASE("self-diff is empty") {
    auto diff = pipeline::diff_iterations(s1, s1);
    CHECK(diff.empty());
    CHECK(pipeline::diff_to_text(diff) == "no differences\n");
  }

  SUBCASE("hand-built diff arithmetic") {
    pipeline::ReportSummary a;
    a.fulfillment_rate = 0.5;
    a.triple_count = 100;
    a.ratings = {{"Q1", "pass"}, {"Q2", "fail"}, {"Q3", "pass"}};
    a.violations = {"level2 x", "level3 y"};
    pipeline::ReportSummary b;
    b.fulfillment_rate = 0.75;
    b.triple_count = 90;
    b.ratings = {{"Q1", "pass"}, {"Q2", "pass"}, {"Q4", "pass"}};
    b.violations = {"level2 x", "level1 z"};
    auto diff = pipeline::diff_iterations(a, b);
    CHECK(diff.fulfillment_rate_delta == doctest::Approx(0.25));
    CHECK(diff.triple_count_delta == -10);
    CHECK(diff.newly_passing == std::vector<std::string>{"Q2", "Q4"});
    CHECK(diff.newly_failing == std::vector<std::string>{"Q3"});
    CHECK(diff.new_violations == std::vector<std::string>{"level1 z"});
    CHECK(diff.resolved_violations == std::vector<std::string>{"level3 y"});
    std::string text = pipeline::diff_to_text(diff);
    CHECK(text.find("+0.25") != std::string::npos);
    CHECK(text.find("-10") != std::string::npos);
    CHECK(text.find("Q2") != std::string::npos);
  }
}

TEST_CASE("SPARQL endpoint answers queries and stays read-only") {
  store::TripleStore store;
  store.import(rdf::parse_turtle(R"(
    @prefix ex: <http://example.org/> .
    ex:m1 a ex:Machine ; ex:serial "A1" .
    ex:m2 a ex:Machine ; ex:serial "A2" .
  )"));
  auto stats_before = store.stats();

  pipeline::SparqlEndpoint endpoint(store);
  REQUIRE(endpoint.start("127.0.0.1", 0));
  httplib::Client client("127.0.0.1", endpoint.port());

  const std::string select =
      "PREFIX ex: <http://example.org/> SELECT ?m WHERE { ?m a ex:Machine }";

  SUBCASE("GET result equals in-process evaluation") {
    auto res = client.Get("/sparql?query=" + httplib::detail::encode_url(select));
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type")
              .find("application/sparql-results+json") != std::string::npos);
    auto direct = query::serialize_result(
        query::evaluate(query::parse_query(select), store),
        query::ResultFormat::SparqlJson);
    CHECK(json::parse(res->body) == json::parse(direct));
  }

  SUBCASE("POST body works like GET") {
    auto res = client.Post("/sparql", select, "application/sparql-query");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["results"]["bindings"].size() == 2);
  }

  SUBCASE("ASK and CONSTRUCT forms") {
    auto ask = client.Post("/sparql",
                           "ASK { ?m a <http://example.org/Machine> }",
                           "application/sparql-query");
    REQUIRE(ask);
    CHECK(json::parse(ask->body)["boolean"] == true);

    auto construct = client.Post(
        "/sparql",
        "CONSTRUCT { ?m a <http://example.org/Thing> } WHERE { ?m a "
        "<http://example.org/Machine> }",
        "application/sparql-query");
    REQUIRE(construct);
    CHECK(construct->status == 200);
    CHECK(construct->get_header_value("Content-Type").find("text/turtle") !=
          std::string::npos);
    CHECK(rdf::parse_turtle(construct->body).size() == 2);
  }

  SUBCASE("malformed query is a 400") {
    auto res = client.Post("/sparql", "SELECT WHERE {", "application/sparql-query");
    REQUIRE(res);
    CHECK(res->status == 400);
  }

  SUBCASE("missing GET parameter is a 400") {
    auto res = client.Get("/sparql");
    REQUIRE(res);
    CHECK(res->status == 400);
  }

  SUBCASE("update verbs get 405") {
    for (const char* update :
         {"INSERT DATA { <a> <b> <c> }", "DELETE WHERE { ?s ?p ?o }",
          "CLEAR ALL", "DROP GRAPH <g>", "LOAD <http://x/>",
          "  # comment\n  insert data { <a> <b> <c> }"}) {
      auto res = client.Post("/sparql", update, "application/sparql-query");
      REQUIRE(res);
      INFO(update);
      CHECK(res->status == 405);
    }
  }

  SUBCASE("write methods get 405") {
    auto put = client.Put("/sparql", "x", "text/plain");
    REQUIRE(put);
    CHECK(put->status == 405);
    auto del = client.Delete("/sparql");
    REQUIRE(del);
    CHECK(del->status == 405);
  }

  endpoint.stop();
  CHECK(store.stats() == stats_before);  // read-only endpoint
}
