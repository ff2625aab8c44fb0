#include "kgf/query/results.hpp"

#include "json.hpp"
#include "kgf/rdf/serialize.hpp"

namespace kgf::query {

namespace {

using nlohmann::json;

json term_to_json(const rdf::Term& t) {
  json j;
  switch (t.kind) {
    case rdf::TermKind::Iri:
      j["type"] = "uri";
      j["value"] = t.value;
      break;
    case rdf::TermKind::Blank:
      j["type"] = "bnode";
      j["value"] = t.value;
      break;
    case rdf::TermKind::Literal:
      j["type"] = "literal";
      j["value"] = t.value;
      if (!t.language.empty())
        j["xml:lang"] = t.language;
      else if (t.datatype != rdf::xsd::string_)
        j["datatype"] = t.datatype;
      break;
  }
  return j;
}

std::string csv_escape(const std::string& s) {
  bool needs_quotes = s.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string serialize_results(const SolutionSequence& solutions,
                              ResultFormat format) {
  if (format == ResultFormat::SparqlJson) {
    json j;
    j["head"]["vars"] = solutions.variables;
    j["results"]["bindings"] = json::array();
    for (const auto& row : solutions.rows) {
      json binding = json::object();
      for (const auto& v : solutions.variables) {
        auto it = row.find(v);
        if (it != row.end()) binding[v] = term_to_json(it->second);
      }
      j["results"]["bindings"].push_back(binding);
    }
    return j.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < solutions.variables.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(solutions.variables[i]);
  }
  out += "\r\n";
  for (const auto& row : solutions.rows) {
    for (std::size_t i = 0; i < solutions.variables.size(); ++i) {
      if (i) out += ',';
      auto it = row.find(solutions.variables[i]);
      if (it != row.end()) out += csv_escape(it->second.value);
    }
    out += "\r\n";
  }
  return out;
}

std::string serialize_ask(bool value, ResultFormat format) {
  if (format == ResultFormat::SparqlJson) {
    json j;
    j["head"] = json::object();
    j["boolean"] = value;
    return j.dump(2) + "\n";
  }
  return std::string(value ? "true" : "false") + "\r\n";
}

std::string serialize_result(const QueryResult& result, ResultFormat format) {
  switch (result.form) {
    case QueryForm::Ask:
      return serialize_ask(result.boolean, format);
    case QueryForm::Construct:
      return rdf::serialize(result.graph, rdf::Format::Turtle);
    case QueryForm::Select:
      return serialize_results(result.solutions, format);
  }
  return {};
}

}  // namespace kgf::query
