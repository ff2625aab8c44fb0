#include "kgf/pipeline/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kgf/error.hpp"

namespace kgf::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p.lexically_normal().string();
  return (fs::path(base_dir) / p).lexically_normal().string();
}

std::string require_existing(const std::string& base_dir,
                             const std::string& path,
                             const std::string& what) {
  std::string full = resolve(base_dir, path);
  if (!fs::exists(full))
    throw config_error(what + " path does not exist: '" + full + "'");
  return full;
}

const json& require_field(const json& j, const char* key,
                          const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw config_error("manifest: missing '" + std::string(key) + "' in " +
                       where);
  return *it;
}

prep::ColumnType column_type_or_throw(const std::string& name) {
  auto t = prep::column_type_from_name(name);
  if (!t) throw config_error("manifest: unknown column type '" + name + "'");
  return *t;
}

prep::CleanOp parse_clean_op(const json& j) {
  std::string op = require_field(j, "op", "a clean step");
  if (op == "trim") return prep::CleanOp::trim();
  if (op == "lowercase")
    return prep::CleanOp::lowercase(require_field(j, "column", "lowercase"));
  if (op == "replace")
    return prep::CleanOp::replace(require_field(j, "column", "replace"),
                                  require_field(j, "from", "replace"),
                                  require_field(j, "to", "replace"));
  if (op == "cast")
    return prep::CleanOp::cast(
        require_field(j, "column", "cast"),
        column_type_or_throw(require_field(j, "type", "cast")));
  if (op == "drop_rows_where_null") {
    std::vector<std::string> cols;
    for (const auto& c : require_field(j, "columns", "drop_rows_where_null"))
      cols.push_back(c.get<std::string>());
    return prep::CleanOp::drop_rows_where_null(std::move(cols));
  }
  throw config_error("manifest: unknown clean op '" + op + "'");
}

}  // namespace

ProjectManifest parse_manifest(const std::string& json_text,
                               const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("manifest is not valid JSON: ") + e.what());
  }

  ProjectManifest m;
  m.project_name = j.value("project_name", "unnamed");
  m.iteration_label = j.value("iteration_label", "iteration-1");

  std::set<std::string> source_names;
  for (const auto& s : j.value("data_sources", json::array())) {
    DataSource src;
    src.name = require_field(s, "name", "a data source");
    if (!source_names.insert(src.name).second)
      throw config_error("manifest: duplicate data source name '" + src.name +
                         "'");
    src.path = require_existing(base_dir,
                                require_field(s, "path", "data source '" +
                                                              src.name + "'"),
                                "data source '" + src.name + "'");
    if (s.contains("delimiter")) {
      std::string d = s["delimiter"];
      if (d.size() != 1)
        throw config_error("manifest: delimiter must be one character");
      src.options.delimiter = d[0];
    }
    src.options.has_header = s.value("has_header", true);
    if (s.contains("null_markers")) {
      src.options.null_markers.clear();
      for (const auto& n : s["null_markers"])
        src.options.null_markers.push_back(n.get<std::string>());
    }
    for (const auto& [col, type] :
         s.value("column_types", json::object()).items())
      src.column_types[col] = column_type_or_throw(type.get<std::string>());
    m.data_sources.push_back(std::move(src));
  }

  const auto& prep = j.value("prep", json::object());
  for (const auto& c : prep.value("clean", json::array())) {
    CleanStep step;
    step.table = require_field(c, "table", "a clean step");
    step.op = parse_clean_op(c);
    m.clean_steps.push_back(std::move(step));
  }
  std::set<std::string> join_names = source_names;
  for (const auto& jn : prep.value("joins", json::array())) {
    JoinStep step;
    step.name = require_field(jn, "name", "a join step");
    if (!join_names.insert(step.name).second)
      throw config_error("manifest: duplicate table name '" + step.name + "'");
    step.spec.left_table = require_field(jn, "left", "join '" + step.name + "'");
    step.spec.right_table =
        require_field(jn, "right", "join '" + step.name + "'");
    step.spec.left_key =
        require_field(jn, "left_key", "join '" + step.name + "'");
    step.spec.right_key =
        require_field(jn, "right_key", "join '" + step.name + "'");
    std::string kind = jn.value("kind", "inner");
    if (kind == "inner") step.spec.kind = prep::JoinSpec::Inner;
    else if (kind == "left") step.spec.kind = prep::JoinSpec::Left;
    else throw config_error("manifest: unknown join kind '" + kind + "'");
    step.spec.column_prefixing = jn.value("column_prefixing", true);
    m.join_steps.push_back(std::move(step));
  }

  m.ontology_path = require_existing(
      base_dir, require_field(j, "ontology", "the manifest"), "ontology");
  for (const auto& p : j.value("mappings", json::array()))
    m.mapping_paths.push_back(
        require_existing(base_dir, p.get<std::string>(), "mapping"));
  if (m.mapping_paths.empty())
    throw config_error("manifest: at least one mapping document is required");
  if (j.contains("shapes"))
    m.shapes_path = require_existing(base_dir, j["shapes"], "shapes");
  if (j.contains("ruleset")) {
    auto rs = infer::ruleset_from_name(j["ruleset"]);
    if (!rs)
      throw config_error("manifest: ruleset must be none, rdfs, or default");
    m.ruleset = *rs;
  }
  if (j.contains("backlog"))
    m.backlog_path = require_existing(base_dir, j["backlog"], "backlog");

  std::set<std::string> query_names;
  for (const auto& q : j.value("integrity_queries", json::array())) {
    IntegrityQuerySpec spec;
    spec.name = require_field(q, "name", "an integrity query");
    if (!query_names.insert(spec.name).second)
      throw config_error("manifest: duplicate integrity query name '" +
                         spec.name + "'");
    spec.path = require_existing(
        base_dir, require_field(q, "path", "integrity query '" + spec.name + "'"),
        "integrity query '" + spec.name + "'");
    std::string expectation = q.value("expectation", "nonempty");
    if (expectation == "empty") spec.expect_empty = true;
    else if (expectation != "nonempty" && expectation != "ask_true")
      throw config_error(
          "manifest: integrity expectation must be nonempty, empty, or "
          "ask_true");
    m.integrity_queries.push_back(std::move(spec));
  }

  m.output_dir = resolve(base_dir, j.value("output_dir", "out"));
  std::string serialization = j.value("serialization", "nquads");
  if (serialization == "turtle") m.serialization = rdf::Format::Turtle;
  else if (serialization == "nquads") m.serialization = rdf::Format::NQuads;
  else if (serialization == "ntriples") m.serialization = rdf::Format::NTriples;
  else throw config_error("manifest: unknown serialization '" + serialization +
                          "'");
  return m;
}

ProjectManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open manifest '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), fs::path(path).parent_path().string());
}

}  // namespace kgf::pipeline
