#include "kgf/rdf/nquads.hpp"

#include <cctype>
#include <vector>

#include "kgf/error.hpp"
#include "kgf/rdf/iri.hpp"

namespace kgf::rdf {

namespace {

void append_utf8(std::string& out, unsigned long cp) {
  if (cp <= 0x7F) {
    out += static_cast<char>(cp);
  } else if (cp <= 0x7FF) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp <= 0xFFFF) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class LineParser {
 public:
  LineParser(const std::string& line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  // Terms on the line, excluding the trailing '.'.
  std::vector<Term> parse_terms() {
    std::vector<Term> terms;
    while (true) {
      skip_ws();
      if (eof()) fail("missing terminating '.'");
      if (peek() == '.') {
        advance();
        skip_ws();
        if (!eof()) fail("trailing content after '.'");
        return terms;
      }
      terms.push_back(parse_term());
    }
  }

 private:
  const std::string& line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(line_no_, pos_ + 1, msg);
  }
  bool eof() const { return pos_ >= line_.size(); }
  char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }
  char peek(std::size_t n) const {
    return pos_ + n < line_.size() ? line_[pos_ + n] : '\0';
  }
  char advance() {
    if (eof()) fail("unexpected end of line");
    return line_[pos_++];
  }
  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r'))
      ++pos_;
  }

  Term parse_term() {
    char c = peek();
    if (c == '<') return Term::iri(parse_iriref());
    if (c == '_' && peek(1) == ':') return parse_blank();
    if (c == '"') return parse_literal();
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string parse_iriref() {
    advance();  // <
    std::string out;
    while (true) {
      if (eof()) fail("unterminated IRI");
      char c = advance();
      if (c == '>') break;
      if (c == '\\') {
        char e = advance();
        if (e == 'u')
          append_utf8(out, parse_hex(4));
        else if (e == 'U')
          append_utf8(out, parse_hex(8));
        else
          fail("invalid escape in IRI");
      } else if (c == ' ' || c == '<' || c == '"' ||
                 static_cast<unsigned char>(c) <= 0x20) {
        fail("illegal character in IRI");
      } else {
        out += c;
      }
    }
    if (!is_absolute_iri(out)) fail("IRI is not absolute: <" + out + ">");
    return out;
  }

  unsigned long parse_hex(int digits) {
    unsigned long cp = 0;
    for (int i = 0; i < digits; ++i) {
      char c = advance();
      if (!std::isxdigit(static_cast<unsigned char>(c)))
        fail("invalid hex digit in escape");
      cp <<= 4;
      if (c >= '0' && c <= '9')
        cp += static_cast<unsigned long>(c - '0');
      else
        cp += static_cast<unsigned long>(
            std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
    }
    return cp;
  }

  Term parse_blank() {
    advance();
    advance();
    std::string label;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                      peek() == '_' || peek() == '-' ||
                      (peek() == '.' &&
                       std::isalnum(static_cast<unsigned char>(peek(1))))))
      label += advance();
    if (label.empty()) fail("empty blank node label");
    return Term::blank(label);
  }

  Term parse_literal() {
    advance();  // "
    std::string lexical;
    while (true) {
      if (eof()) fail("unterminated string literal");
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        char e = advance();
        switch (e) {
          case 't': lexical += '\t'; break;
          case 'b': lexical += '\b'; break;
          case 'n': lexical += '\n'; break;
          case 'r': lexical += '\r'; break;
          case 'f': lexical += '\f'; break;
          case '"': lexical += '"'; break;
          case '\'': lexical += '\''; break;
          case '\\': lexical += '\\'; break;
          case 'u': append_utf8(lexical, parse_hex(4)); break;
          case 'U': append_utf8(lexical, parse_hex(8)); break;
          default: fail("invalid string escape");
        }
      } else {
        lexical += c;
      }
    }
    if (peek() == '@') {
      advance();
      std::string lang;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                        peek() == '-'))
        lang += advance();
      if (lang.empty()) fail("empty language tag");
      return Term::lang_literal(lexical, lang);
    }
    if (peek() == '^' && peek(1) == '^') {
      advance();
      advance();
      if (peek() != '<') fail("expected datatype IRI");
      return Term::literal(lexical, parse_iriref());
    }
    return Term::literal(lexical);
  }
};

void check_positions(const std::vector<Term>& t, std::size_t line_no) {
  if (t[0].is_literal())
    throw parse_error(line_no, 1, "subject cannot be a literal");
  if (!t[1].is_iri())
    throw parse_error(line_no, 1, "predicate must be an IRI");
}

template <typename Sink>
void parse_lines(const std::string& text, Sink&& sink) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = text.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    ++line_no;
    start = end == std::string::npos ? text.size() + 1 : end + 1;
    // skip blank lines and comment lines
    std::size_t i = 0;
    while (i < line.size() &&
           (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    if (i >= line.size() || line[i] == '#') continue;
    auto terms = LineParser(line, line_no).parse_terms();
    sink(terms, line_no);
  }
}

}  // namespace

Graph parse_ntriples(const std::string& text) {
  Graph g;
  parse_lines(text, [&](const std::vector<Term>& t, std::size_t line_no) {
    if (t.size() != 3)
      throw parse_error(line_no, 1, "expected exactly 3 terms");
    check_positions(t, line_no);
    g.insert(t[0], t[1], t[2]);
  });
  return g;
}

Dataset parse_nquads(const std::string& text) {
  Dataset ds;
  parse_lines(text, [&](const std::vector<Term>& t, std::size_t line_no) {
    if (t.size() != 3 && t.size() != 4)
      throw parse_error(line_no, 1, "expected 3 or 4 terms");
    check_positions(t, line_no);
    Triple triple{t[0], t[1], t[2]};
    if (t.size() == 4) {
      if (!t[3].is_iri())
        throw parse_error(line_no, 1, "graph label must be an IRI");
      ds.named_graph(t[3].value).insert(std::move(triple));
    } else {
      ds.default_graph().insert(std::move(triple));
    }
  });
  return ds;
}

}  // namespace kgf::rdf
