#include "kgf/rdf/syntax.hpp"

#include <fstream>
#include <sstream>

#include "kgf/error.hpp"
#include "kgf/rdf/nquads.hpp"
#include "kgf/rdf/turtle.hpp"

namespace kgf::rdf {

SyntaxReport validate_syntax_text(const std::string& text, Format format) {
  SyntaxReport report;
  try {
    switch (format) {
      case Format::Turtle:
        report.triple_count = parse_turtle(text).size();
        break;
      case Format::NTriples:
        report.triple_count = parse_ntriples(text).size();
        break;
      case Format::NQuads:
        report.triple_count = parse_nquads(text).triple_count();
        break;
    }
  } catch (const parse_error& e) {
    report.ok = false;
    report.errors.push_back({e.line(), e.column(), e.message()});
  }
  return report;
}

SyntaxReport validate_syntax(const std::string& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_syntax_text(buf.str(), format);
}

}  // namespace kgf::rdf
