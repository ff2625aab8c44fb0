#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgf/infer/rules.hpp"
#include "kgf/prep/clean.hpp"
#include "kgf/prep/join.hpp"
#include "kgf/prep/table.hpp"
#include "kgf/rdf/serialize.hpp"
#include "kgf/shacl/shapes.hpp"

namespace kgf::pipeline {

struct DataSource {
  std::string name;
  std::string path;  // resolved against the manifest directory
  prep::CsvOptions options;
  std::map<std::string, prep::ColumnType> column_types;
};

struct CleanStep {
  std::string table;
  prep::CleanOp op;
};

struct JoinStep {
  std::string name;  // output table name
  prep::JoinSpec spec;
};

struct IntegrityQuerySpec {
  std::string name;
  std::string path;
  bool expect_empty = false;
};

/// The declarative project configuration (JSON). All paths are stored
/// resolved; see docs/manifest_format.md for the schema.
struct ProjectManifest {
  std::string project_name;
  std::string iteration_label = "iteration-1";
  std::vector<DataSource> data_sources;
  std::vector<CleanStep> clean_steps;
  std::vector<JoinStep> join_steps;
  std::string ontology_path;
  std::vector<std::string> mapping_paths;
  std::optional<std::string> shapes_path;
  infer::Ruleset ruleset = infer::Ruleset::Default;
  std::optional<std::string> backlog_path;
  std::vector<IntegrityQuerySpec> integrity_queries;
  std::string output_dir = "out";
  rdf::Format serialization = rdf::Format::NQuads;
};

/// Parses and validates the manifest: every referenced path must exist and
/// names must be unique per section. Throws config_error naming the problem.
ProjectManifest load_manifest(const std::string& path);
ProjectManifest parse_manifest(const std::string& json_text,
                               const std::string& base_dir);

}  // namespace kgf::pipeline
