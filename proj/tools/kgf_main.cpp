#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kgf/cq/backlog.hpp"
#include "kgf/error.hpp"
#include "kgf/onto/lint.hpp"
#include "kgf/onto/vocabulary.hpp"
#include "kgf/pipeline/endpoint.hpp"
#include "kgf/pipeline/manifest.hpp"
#include "kgf/pipeline/pipeline.hpp"
#include "kgf/rdf/nquads.hpp"
#include "kgf/rdf/serialize.hpp"
#include "kgf/rdf/turtle.hpp"
#include "kgf/store/store.hpp"

namespace fs = std::filesystem;
using namespace kgf;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

rdf::Format format_for_path(const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  if (ext == ".ttl" || ext == ".turtle") return rdf::Format::Turtle;
  if (ext == ".nt") return rdf::Format::NTriples;
  if (ext == ".nq" || ext == ".nquads") return rdf::Format::NQuads;
  throw config_error("cannot infer RDF format from extension of " + path +
                     " (expected .ttl, .nt, or .nq)");
}

void load_into_store(store::TripleStore& store, const std::string& path) {
  std::string text = read_file(path);
  switch (format_for_path(path)) {
    case rdf::Format::Turtle:
      store.import(rdf::parse_turtle(text));
      break;
    case rdf::Format::NTriples:
      store.import(rdf::parse_ntriples(text));
      break;
    case rdf::Format::NQuads:
      store.import(rdf::parse_nquads(text));
      break;
  }
}

pipeline::ProjectManifest load_manifest_with_overrides(
    const std::string& manifest_path, const std::string& iteration_override,
    const std::string& out_override,
    const std::string& serialization_override) {
  if (manifest_path.empty())
    throw config_error("a manifest is required (--manifest or KGF_MANIFEST)");
  pipeline::ProjectManifest manifest = pipeline::load_manifest(manifest_path);
  if (!iteration_override.empty())
    manifest.iteration_label = iteration_override;
  if (!out_override.empty()) manifest.output_dir = out_override;
  if (!serialization_override.empty()) {
    if (serialization_override == "turtle")
      manifest.serialization = rdf::Format::Turtle;
    else if (serialization_override == "ntriples")
      manifest.serialization = rdf::Format::NTriples;
    else if (serialization_override == "nquads")
      manifest.serialization = rdf::Format::NQuads;
    else
      throw config_error("unknown serialization format: " +
                         serialization_override);
  }
  return manifest;
}

void print_stages(const pipeline::IterationReport& report) {
  for (const auto& stage : report.stages) {
    std::cout << (stage.ok ? "ok   " : "FAIL ") << stage.name;
    if (!stage.error.empty()) std::cout << "  (" << stage.error << ")";
    std::cout << "\n";
  }
  std::cout << "artifacts: " << report.artifact_dir << "\n";
  std::cout << "overall: " << report.overall << "\n";
}

int run_up_to(const std::string& manifest_path,
              const std::string& iteration_override,
              const std::string& out_override,
              const std::string& serialization_override,
              pipeline::Stage up_to) {
  pipeline::ProjectManifest manifest = load_manifest_with_overrides(
      manifest_path, iteration_override, out_override,
      serialization_override);
  pipeline::IterationReport report = pipeline::run_iteration(manifest, up_to);
  print_stages(report);
  return report.overall == "pass" ? kExitPass : kExitFail;
}

volatile std::sig_atomic_t g_interrupted = 0;
void handle_interrupt(int) { g_interrupted = 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgf: knowledge-graph construction workbench"};
  app.require_subcommand(1);

  std::string manifest_path, iteration_override, out_override;
  std::string serialization_override;
  auto add_manifest_options = [&](CLI::App* cmd) {
    cmd->add_option("--manifest,-m", manifest_path, "project manifest (JSON)")
        ->envname("KGF_MANIFEST");
    cmd->add_option("--iteration,-i", iteration_override,
                    "override the manifest iteration label")
        ->envname("KGF_ITERATION");
    cmd->add_option("--out,-o", out_override,
                    "override the manifest output directory")
        ->envname("KGF_OUT");
    if (cmd->get_name() != "evaluate")
      cmd->add_option("--format,-f", serialization_override,
                      "override the graph serialization: turtle, ntriples, "
                      "nquads")
          ->envname("KGF_FORMAT");
  };

  auto* profile_cmd = app.add_subcommand(
      "profile", "ingest the data sources and write quality profiles");
  add_manifest_options(profile_cmd);

  auto* prep_cmd = app.add_subcommand(
      "prep", "profile, then clean and denormalize the tables");
  add_manifest_options(prep_cmd);

  auto* map_cmd = app.add_subcommand(
      "map", "run through mapping: lint the ontology, build the graph");
  add_manifest_options(map_cmd);

  auto* load_cmd =
      app.add_subcommand("load", "load RDF files and print store statistics");
  std::vector<std::string> load_files;
  load_cmd->add_option("files", load_files, "RDF files (.ttl, .nt, .nq)")
      ->required();

  auto* lint_cmd =
      app.add_subcommand("lint", "lint an ontology and print the findings");
  std::string lint_ontology;
  lint_cmd->add_option("ontology", lint_ontology, "ontology file (Turtle)")
      ->required();

  auto* quality_cmd = app.add_subcommand(
      "quality", "run through the three-level quality checks");
  add_manifest_options(quality_cmd);

  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "run the full iteration and print the evaluation table");
  add_manifest_options(evaluate_cmd);
  std::string table_format = "markdown";
  evaluate_cmd
      ->add_option("--format,-f", table_format,
                   "evaluation table format: csv, markdown, json")
      ->envname("KGF_FORMAT");

  auto* run_cmd =
      app.add_subcommand("run", "run one full iteration of the pipeline");
  add_manifest_options(run_cmd);

  auto* serve_cmd = app.add_subcommand(
      "serve", "serve RDF files over a read-only HTTP SPARQL endpoint");
  std::vector<std::string> serve_files;
  int port = 8089;
  std::string bind_host = "127.0.0.1";
  serve_cmd->add_option("files", serve_files, "RDF files (.ttl, .nt, .nq)")
      ->required();
  serve_cmd->add_option("--port,-p", port, "TCP port (0 picks a free port)")
      ->envname("KGF_PORT");
  serve_cmd->add_option("--bind,-b", bind_host, "bind address")
      ->envname("KGF_BIND");

  auto* diff_cmd = app.add_subcommand(
      "diff", "compare two iteration reports (report.json files)");
  std::string diff_a, diff_b;
  diff_cmd->add_option("before", diff_a, "earlier report.json")->required();
  diff_cmd->add_option("after", diff_b, "later report.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (profile_cmd->parsed())
      return run_up_to(manifest_path, iteration_override, out_override,
                       serialization_override, pipeline::Stage::Profile);
    if (prep_cmd->parsed())
      return run_up_to(manifest_path, iteration_override, out_override,
                       serialization_override, pipeline::Stage::Prep);
    if (map_cmd->parsed())
      return run_up_to(manifest_path, iteration_override, out_override,
                       serialization_override, pipeline::Stage::Map);
    if (quality_cmd->parsed())
      return run_up_to(manifest_path, iteration_override, out_override,
                       serialization_override, pipeline::Stage::Quality);
    if (run_cmd->parsed())
      return run_up_to(manifest_path, iteration_override, out_override,
                       serialization_override, pipeline::Stage::Evaluate);

    if (evaluate_cmd->parsed()) {
      auto format = cq::table_format_from_name(table_format);
      if (!format)
        throw config_error("unknown table format: " + table_format);
      pipeline::ProjectManifest manifest = load_manifest_with_overrides(
          manifest_path, iteration_override, out_override, "");
      pipeline::IterationReport report =
          pipeline::run_iteration(manifest, pipeline::Stage::Evaluate);
      std::cout << cq::render_table(report.evaluation, *format);
      return report.overall == "pass" ? kExitPass : kExitFail;
    }

    if (load_cmd->parsed()) {
      store::TripleStore store;
      for (const auto& path : load_files) load_into_store(store, path);
      auto stats = store.stats();
      std::cout << "triples: " << stats.triple_count << "\n"
                << "graphs: " << stats.graph_count << "\n"
                << "distinct subjects: " << stats.distinct_subjects << "\n"
                << "distinct predicates: " << stats.distinct_predicates << "\n"
                << "distinct objects: " << stats.distinct_objects << "\n";
      return kExitPass;
    }

    if (lint_cmd->parsed()) {
      auto vocabulary =
          onto::extract_vocabulary(rdf::parse_turtle(read_file(lint_ontology)));
      auto findings = onto::lint(vocabulary);
      std::cout << onto::lint_report_text(findings);
      for (const auto& finding : findings)
        if (finding.severity == onto::Severity::Error) return kExitFail;
      return kExitPass;
    }

    if (serve_cmd->parsed()) {
      store::TripleStore store;
      for (const auto& path : serve_files) load_into_store(store, path);
      pipeline::SparqlEndpoint endpoint(store);
      if (!endpoint.start(bind_host, port))
        throw config_error("cannot bind " + bind_host + ":" +
                           std::to_string(port));
      std::cout << "serving " << store.size() << " triples on http://"
                << bind_host << ":" << endpoint.port() << "/sparql\n";
      std::signal(SIGINT, handle_interrupt);
      std::signal(SIGTERM, handle_interrupt);
      while (!g_interrupted)
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      endpoint.stop();
      return kExitPass;
    }

    if (diff_cmd->parsed()) {
      pipeline::ReportSummary before = pipeline::load_summary(diff_a);
      pipeline::ReportSummary after = pipeline::load_summary(diff_b);
      std::cout << pipeline::diff_to_text(
          pipeline::diff_iterations(before, after));
      return kExitPass;
    }
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
