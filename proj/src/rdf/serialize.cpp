#include "kgf/rdf/serialize.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>

namespace kgf::rdf {

namespace {

std::string escape_literal(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string escape_iri(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '>' ||
        c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`' ||
        c == '\\') {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04X", c);
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

// Renames blank node labels to b0, b1, ... in first-seen order.
class BlankRenamer {
 public:
  std::string operator()(const std::string& label) {
    auto [it, inserted] = map_.emplace(label, "b" + std::to_string(next_));
    if (inserted) ++next_;
    return it->second;
  }

 private:
  std::map<std::string, std::string> map_;
  int next_ = 0;
};

std::string render_term(const Term& t, BlankRenamer& blanks) {
  switch (t.kind) {
    case TermKind::Iri:
      return "<" + escape_iri(t.value) + ">";
    case TermKind::Blank:
      return "_:" + blanks(t.value);
    case TermKind::Literal: {
      std::string out = "\"" + escape_literal(t.value) + "\"";
      if (!t.language.empty())
        out += "@" + t.language;
      else if (t.datatype != xsd::string_)
        out += "^^<" + escape_iri(t.datatype) + ">";
      return out;
    }
  }
  return {};
}

std::string serialize_ntriples(const Graph& g, BlankRenamer& blanks,
                               const std::string& graph_label = {}) {
  std::string out;
  for (const auto& t : g) {
    out += render_term(t.subject, blanks);
    out += ' ';
    out += render_term(t.predicate, blanks);
    out += ' ';
    out += render_term(t.object, blanks);
    if (!graph_label.empty()) {
      out += ' ';
      out += graph_label;
    }
    out += " .\n";
  }
  return out;
}

// Turtle output groups consecutive triples sharing a subject with ';'.
// The triple set is ordered, so same-subject runs are contiguous.
std::string serialize_turtle(const Graph& g, BlankRenamer& blanks) {
  std::string out;
  const Term* prev_subject = nullptr;
  for (const auto& t : g) {
    if (prev_subject && t.subject == *prev_subject) {
      out += " ;\n    ";
    } else {
      if (prev_subject) out += " .\n";
      out += render_term(t.subject, blanks);
      out += "\n    ";
    }
    out += render_term(t.predicate, blanks);
    out += ' ';
    out += render_term(t.object, blanks);
    prev_subject = &t.subject;
  }
  if (prev_subject) out += " .\n";
  return out;
}

}  // namespace

Format format_from_name(const std::string& name) {
  if (name == "turtle" || name == "ttl") return Format::Turtle;
  if (name == "ntriples" || name == "nt") return Format::NTriples;
  if (name == "nquads" || name == "nq") return Format::NQuads;
  throw std::invalid_argument("unknown RDF format: " + name);
}

std::string format_name(Format f) {
  switch (f) {
    case Format::Turtle: return "turtle";
    case Format::NTriples: return "ntriples";
    case Format::NQuads: return "nquads";
  }
  return {};
}

std::string term_to_string(const Term& t) {
  BlankRenamer unused;
  if (t.is_blank()) return "_:" + t.value;
  return render_term(t, unused);
}

std::string serialize(const Graph& graph, Format format) {
  BlankRenamer blanks;
  switch (format) {
    case Format::Turtle:
      return serialize_turtle(graph, blanks);
    case Format::NTriples:
    case Format::NQuads:
      return serialize_ntriples(graph, blanks);
  }
  return {};
}

std::string serialize(const Dataset& dataset, Format format) {
  if (format != Format::NQuads) {
    // Only the default graph is expressible in triple-only formats.
    Graph merged = dataset.default_graph();
    for (const auto& [_, g] : dataset.named_graphs()) merged.merge(g);
    return serialize(merged, format);
  }
  BlankRenamer blanks;
  std::string out = serialize_ntriples(dataset.default_graph(), blanks);
  for (const auto& [iri, g] : dataset.named_graphs())
    out += serialize_ntriples(g, blanks, "<" + escape_iri(iri) + ">");
  return out;
}

}  // namespace kgf::rdf
