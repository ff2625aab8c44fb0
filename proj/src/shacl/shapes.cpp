#include "kgf/shacl/shapes.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <set>

#include "json.hpp"
#include "kgf/error.hpp"
#include "kgf/query/eval.hpp"
#include "kgf/query/parser.hpp"
#include "kgf/rdf/serialize.hpp"

namespace kgf::shacl {

namespace {

std::string sh(const char* local) { return std::string(rdf::ns::sh) + local; }
const std::string kType = std::string(rdf::ns::rdf) + "type";
const std::string kFirst = std::string(rdf::ns::rdf) + "first";
const std::string kRest = std::string(rdf::ns::rdf) + "rest";
const std::string kNil = std::string(rdf::ns::rdf) + "nil";

std::vector<rdf::Term> objects(const rdf::Graph& g, const rdf::Term& s,
                               const std::string& p) {
  std::vector<rdf::Term> out;
  for (const auto& t : g)
    if (t.subject == s && t.predicate.value == p) out.push_back(t.object);
  return out;
}

std::optional<rdf::Term> object(const rdf::Graph& g, const rdf::Term& s,
                                const std::string& p) {
  auto all = objects(g, s, p);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<rdf::Term> read_list(const rdf::Graph& g, rdf::Term head) {
  std::vector<rdf::Term> out;
  while (!(head.is_iri() && head.value == kNil)) {
    auto first = object(g, head, kFirst);
    auto rest = object(g, head, kRest);
    if (!first || !rest)
      throw config_error("malformed value list in shapes graph");
    out.push_back(*first);
    head = *rest;
  }
  return out;
}

NodeKind parse_node_kind(const rdf::Term& t) {
  if (t.value == sh("IRI")) return NodeKind::Iri;
  if (t.value == sh("Literal")) return NodeKind::Literal;
  if (t.value == sh("BlankNode")) return NodeKind::Blank;
  throw config_error("unknown nodeKind '" + t.value + "'");
}

double to_number(const rdf::Term& t) {
  return std::strtod(t.value.c_str(), nullptr);
}

/// Every shape-vocabulary predicate used on `node` must be in `allowed`.
void reject_unknown_parameters(const rdf::Graph& g, const rdf::Term& node,
                               const std::set<std::string>& allowed) {
  for (const auto& t : g) {
    if (t.subject != node) continue;
    const std::string& p = t.predicate.value;
    if (p.rfind(rdf::ns::sh, 0) == 0 && !allowed.count(p))
      throw unsupported_feature("shape parameter <" + p + ">");
  }
}

PropertyConstraint parse_property(const rdf::Graph& g, const rdf::Term& node) {
  static const std::set<std::string> allowed{
      sh("path"),    sh("minCount"),     sh("maxCount"),
      sh("datatype"), sh("class"),       sh("nodeKind"),
      sh("pattern"), sh("in"),           sh("minInclusive"),
      sh("maxInclusive")};
  reject_unknown_parameters(g, node, allowed);

  PropertyConstraint c;
  auto path = object(g, node, sh("path"));
  if (!path) throw config_error("property shape without sh:path");
  if (path->is_iri()) {
    c.path = path->value;
  } else {
    auto inv = object(g, *path, sh("inversePath"));
    if (!inv || !inv->is_iri())
      throw config_error("sh:path must be an IRI or [ sh:inversePath <p> ]");
    c.path = inv->value;
    c.inverse = true;
  }
  if (auto v = object(g, node, sh("minCount")))
    c.min_count = static_cast<std::size_t>(std::stoul(v->value));
  if (auto v = object(g, node, sh("maxCount")))
    c.max_count = static_cast<std::size_t>(std::stoul(v->value));
  if (c.min_count && c.max_count && *c.min_count > *c.max_count)
    throw config_error("minCount exceeds maxCount on <" + c.path + ">");
  if (auto v = object(g, node, sh("datatype"))) c.datatype = v->value;
  if (auto v = object(g, node, sh("class"))) c.class_iri = v->value;
  if (auto v = object(g, node, sh("nodeKind")))
    c.node_kind = parse_node_kind(*v);
  if (auto v = object(g, node, sh("pattern"))) c.pattern = v->value;
  if (auto v = object(g, node, sh("in"))) c.in_list = read_list(g, *v);
  if (auto v = object(g, node, sh("minInclusive")))
    c.min_inclusive = to_number(*v);
  if (auto v = object(g, node, sh("maxInclusive")))
    c.max_inclusive = to_number(*v);
  return c;
}

}  // namespace

std::vector<Shape> parse_shapes(const rdf::Graph& shapes_graph) {
  const rdf::Graph& g = shapes_graph;
  // Shape nodes: anything typed sh:NodeShape or carrying a target.
  std::set<rdf::Term> shape_nodes;
  for (const auto& t : g) {
    if (t.predicate.value == kType && t.object.value == sh("NodeShape"))
      shape_nodes.insert(t.subject);
    if (t.predicate.value == sh("targetClass") ||
        t.predicate.value == sh("targetNode") ||
        t.predicate.value == sh("targetSubjectsOf"))
      shape_nodes.insert(t.subject);
  }

  static const std::set<std::string> allowed{
      sh("targetClass"), sh("targetNode"), sh("targetSubjectsOf"),
      sh("property"),    sh("nodeKind"),   sh("class"),
      sh("in")};

  std::vector<Shape> shapes;
  for (const auto& node : shape_nodes) {
    reject_unknown_parameters(g, node, allowed);
    Shape s;
    s.id = node.value;
    if (auto v = object(g, node, sh("targetClass"))) s.target_class = v->value;
    s.target_nodes = objects(g, node, sh("targetNode"));
    if (auto v = object(g, node, sh("targetSubjectsOf")))
      s.target_subjects_of = v->value;
    if (!s.target_class && s.target_nodes.empty() && !s.target_subjects_of)
      throw config_error("shape <" + s.id + "> declares no target");
    if (auto v = object(g, node, sh("nodeKind")))
      s.node_constraint.node_kind = parse_node_kind(*v);
    if (auto v = object(g, node, sh("class")))
      s.node_constraint.class_iri = v->value;
    if (auto v = object(g, node, sh("in")))
      s.node_constraint.in_list = read_list(g, *v);
    for (const auto& p : objects(g, node, sh("property")))
      s.constraints.push_back(parse_property(g, p));
    shapes.push_back(std::move(s));
  }
  std::sort(shapes.begin(), shapes.end(),
            [](const Shape& a, const Shape& b) { return a.id < b.id; });
  return shapes;
}

namespace {

bool has_kind(const rdf::Term& t, NodeKind k) {
  switch (k) {
    case NodeKind::Iri: return t.is_iri();
    case NodeKind::Literal: return t.is_literal();
    case NodeKind::Blank: return t.is_blank();
  }
  return false;
}

std::string kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Iri: return "IRI";
    case NodeKind::Literal: return "Literal";
    case NodeKind::Blank: return "BlankNode";
  }
  return "?";
}

bool in_list(const rdf::Term& t, const std::vector<rdf::Term>& list) {
  return std::find(list.begin(), list.end(), t) != list.end();
}

bool has_type(const store::TripleStore& store, const rdf::Term& node,
              const std::string& cls) {
  return store.contains({node, rdf::Term::iri(kType), rdf::Term::iri(cls)});
}

std::vector<rdf::Term> focus_nodes(const store::TripleStore& store,
                                   const Shape& s) {
  std::set<rdf::Term> out(s.target_nodes.begin(), s.target_nodes.end());
  if (s.target_class) {
    for (const auto& t : store.match({std::nullopt, rdf::Term::iri(kType),
                                      rdf::Term::iri(*s.target_class)}))
      out.insert(t.subject);
  }
  if (s.target_subjects_of) {
    for (const auto& t : store.match(
             {std::nullopt, rdf::Term::iri(*s.target_subjects_of),
              std::nullopt}))
      out.insert(t.subject);
  }
  return {out.begin(), out.end()};
}

std::vector<rdf::Term> path_values(const store::TripleStore& store,
                                   const rdf::Term& focus,
                                   const PropertyConstraint& c) {
  std::vector<rdf::Term> values;
  if (c.inverse) {
    for (const auto& t :
         store.match({std::nullopt, rdf::Term::iri(c.path), focus}))
      values.push_back(t.subject);
  } else {
    for (const auto& t :
         store.match({focus, rdf::Term::iri(c.path), std::nullopt}))
      values.push_back(t.object);
  }
  return values;
}

void check_property(const store::TripleStore& store, const Shape& shape,
                    const rdf::Term& focus, const PropertyConstraint& c,
                    std::set<Violation>& out) {
  auto values = path_values(store, focus, c);
  auto add = [&](const std::string& component,
                 const std::optional<rdf::Term>& value,
                 const std::string& msg) {
    out.insert({shape.id, focus, component, value,
                "<" + c.path + ">: " + msg});
  };
  if (c.min_count && values.size() < *c.min_count)
    add("minCount", std::nullopt,
        "expected at least " + std::to_string(*c.min_count) + " values, got " +
            std::to_string(values.size()));
  if (c.max_count && values.size() > *c.max_count)
    add("maxCount", std::nullopt,
        "expected at most " + std::to_string(*c.max_count) + " values, got " +
            std::to_string(values.size()));
  for (const auto& v : values) {
    if (c.datatype && (!v.is_literal() || v.datatype != *c.datatype))
      add("datatype", v, "value is not a literal of <" + *c.datatype + ">");
    if (c.class_iri && (v.is_literal() || !has_type(store, v, *c.class_iri)))
      add("class", v, "value is not an instance of <" + *c.class_iri + ">");
    if (c.node_kind && !has_kind(v, *c.node_kind))
      add("nodeKind", v, "value is not of kind " + kind_name(*c.node_kind));
    if (c.pattern) {
      std::regex re(*c.pattern);
      if (!std::regex_search(v.value, re))
        add("pattern", v, "value does not match /" + *c.pattern + "/");
    }
    if (c.in_list && !in_list(v, *c.in_list))
      add("in", v, "value is not in the allowed list");
    if (c.min_inclusive || c.max_inclusive) {
      char* end = nullptr;
      double n = std::strtod(v.value.c_str(), &end);
      bool numeric = v.is_literal() && end == v.value.c_str() + v.value.size() &&
                     !v.value.empty();
      if (c.min_inclusive && (!numeric || n < *c.min_inclusive))
        add("minInclusive", v, "value is below the minimum");
      if (c.max_inclusive && (!numeric || n > *c.max_inclusive))
        add("maxInclusive", v, "value is above the maximum");
    }
  }
}

void check_node(const store::TripleStore& store, const Shape& shape,
                const rdf::Term& focus, std::set<Violation>& out) {
  const auto& nc = shape.node_constraint;
  if (nc.node_kind && !has_kind(focus, *nc.node_kind))
    out.insert({shape.id, focus, "nodeKind", focus,
                "focus node is not of kind " + kind_name(*nc.node_kind)});
  if (nc.class_iri &&
      (focus.is_literal() || !has_type(store, focus, *nc.class_iri)))
    out.insert({shape.id, focus, "class", focus,
                "focus node is not an instance of <" + *nc.class_iri + ">"});
  if (nc.in_list && !in_list(focus, *nc.in_list))
    out.insert({shape.id, focus, "in", focus,
                "focus node is not in the allowed list"});
}

}  // namespace

ValidationReport validate(const store::TripleStore& store,
                          const std::vector<Shape>& shapes) {
  std::set<Violation> found;
  for (const auto& shape : shapes) {
    for (const auto& focus : focus_nodes(store, shape)) {
      check_node(store, shape, focus, found);
      for (const auto& c : shape.constraints)
        check_property(store, shape, focus, c, found);
    }
  }
  ValidationReport report;
  report.violations.assign(found.begin(), found.end());
  report.conforms = report.violations.empty();
  return report;
}

std::optional<Expectation> expectation_from_name(const std::string& name) {
  if (name == "ask_true") return Expectation::AskTrue;
  if (name == "ask_false") return Expectation::AskFalse;
  if (name == "nonempty") return Expectation::Nonempty;
  if (name == "empty") return Expectation::Empty;
  return std::nullopt;
}

std::string expectation_name(Expectation e) {
  switch (e) {
    case Expectation::AskTrue: return "ask_true";
    case Expectation::AskFalse: return "ask_false";
    case Expectation::Nonempty: return "nonempty";
    case Expectation::Empty: return "empty";
  }
  return "ask_true";
}

QueryConstraint wrap_cq_as_constraint(const std::string& cq_id,
                                      const std::string& query_text,
                                      Expectation expectation) {
  auto q = query::parse_query(query_text);  // throws on bad syntax now
  bool is_ask = q.form == query::QueryForm::Ask;
  bool wants_ask = expectation == Expectation::AskTrue ||
                   expectation == Expectation::AskFalse;
  if (q.form == query::QueryForm::Construct)
    throw config_error("constraint '" + cq_id +
                       "': CONSTRUCT queries cannot be constraints");
  if (is_ask != wants_ask)
    throw config_error("constraint '" + cq_id +
                       "': expectation does not match the query form");
  return {cq_id, query_text, expectation};
}

ValidationReport run_query_constraints(
    const store::TripleStore& store,
    const std::vector<QueryConstraint>& constraints) {
  ValidationReport report;
  for (const auto& c : constraints) {
    bool passed = false;
    std::string detail;
    try {
      auto result = query::evaluate(query::parse_query(c.query), store);
      if (result.form == query::QueryForm::Ask) {
        passed = c.expectation == Expectation::AskTrue ? result.boolean
                                                       : !result.boolean;
        detail = result.boolean ? "ASK returned true" : "ASK returned false";
      } else {
        std::size_t n = result.solutions.rows.size();
        passed = c.expectation == Expectation::Nonempty ? n > 0 : n == 0;
        detail = "SELECT returned " + std::to_string(n) + " rows";
      }
    } catch (const std::exception& e) {
      passed = false;
      detail = std::string("evaluation failed: ") + e.what();
    }
    if (!passed) {
      report.violations.push_back(
          {c.name, rdf::Term::iri(""), "query-constraint", std::nullopt,
           detail + " (expected " + expectation_name(c.expectation) + ")"});
    }
  }
  std::sort(report.violations.begin(), report.violations.end());
  report.conforms = report.violations.empty();
  return report;
}

namespace {

nlohmann::json violation_json(const Violation& v) {
  nlohmann::json j{{"shape", v.shape},
                   {"focus_node", rdf::term_to_string(v.focus_node)},
                   {"constraint", v.constraint},
                   {"message", v.message}};
  if (v.value) j["value"] = rdf::term_to_string(*v.value);
  return j;
}

}  // namespace

std::string report_to_json(const ValidationReport& report) {
  nlohmann::json j{{"conforms", report.conforms},
                   {"violations", nlohmann::json::array()}};
  for (const auto& v : report.violations)
    j["violations"].push_back(violation_json(v));
  return j.dump(2) + "\n";
}

std::string report_to_markdown(const ValidationReport& report) {
  std::string out = report.conforms ? "**conforms**\n" : "**does not conform**\n";
  if (!report.violations.empty()) {
    out += "\n| shape | focus node | constraint | message |\n";
    out += "| --- | --- | --- | --- |\n";
    for (const auto& v : report.violations) {
      out += "| " + v.shape + " | " + rdf::term_to_string(v.focus_node) +
             " | " + v.constraint + " | " + v.message + " |\n";
    }
  }
  return out;
}

}  // namespace kgf::shacl
