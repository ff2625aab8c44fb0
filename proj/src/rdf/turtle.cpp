#include "kgf/rdf/turtle.hpp"

#include <cctype>
#include <map>
#include <vector>

#include "kgf/error.hpp"
#include "kgf/rdf/iri.hpp"

namespace kgf::rdf {

namespace {

constexpr int kMaxNesting = 128;

const std::string kRdfType = std::string(ns::rdf) + "type";
const std::string kRdfFirst = std::string(ns::rdf) + "first";
const std::string kRdfRest = std::string(ns::rdf) + "rest";
const std::string kRdfNil = std::string(ns::rdf) + "nil";

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

bool is_pn_chars_base(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool is_pn_chars(char c) {
  return is_pn_chars_base(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '_' || c == '-';
}

class TurtleParser {
 public:
  TurtleParser(const std::string& text, std::optional<std::string> base)
      : text_(text), base_(std::move(base)) {}

  Graph parse() {
    while (true) {
      skip_ws();
      if (eof()) break;
      statement();
    }
    return std::move(graph_);
  }

 private:
  const std::string& text_;
  std::optional<std::string> base_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::map<std::string, std::string> prefixes_;
  Graph graph_;
  int anon_counter_ = 0;
  int depth_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(line_, col_, msg);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  bool match_keyword(const char* kw) {
    // Case-insensitive bareword match (for SPARQL-style PREFIX/BASE).
    std::size_t i = 0;
    while (kw[i]) {
      char c = peek(i);
      if (std::tolower(static_cast<unsigned char>(c)) !=
          std::tolower(static_cast<unsigned char>(kw[i])))
        return false;
      ++i;
    }
    char after = peek(i);
    if (is_pn_chars(after) || after == ':') return false;
    for (std::size_t k = 0; k < i; ++k) advance();
    return true;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  void statement() {
    if (peek() == '@') {
      advance();
      if (match_keyword("prefix")) {
        prefix_directive(true);
      } else if (match_keyword("base")) {
        base_directive(true);
      } else {
        fail("unknown directive");
      }
      return;
    }
    if (match_keyword("prefix")) {
      prefix_directive(false);
      return;
    }
    if (match_keyword("base")) {
      base_directive(false);
      return;
    }
    triples();
    skip_ws();
    expect('.');
  }

  void prefix_directive(bool at_form) {
    skip_ws();
    std::string prefix = parse_prefix_name();
    expect(':');
    skip_ws();
    prefixes_[prefix] = parse_iriref();
    if (at_form) {
      skip_ws();
      expect('.');
    }
  }

  void base_directive(bool at_form) {
    skip_ws();
    base_ = parse_iriref();
    if (at_form) {
      skip_ws();
      expect('.');
    }
  }

  std::string parse_prefix_name() {
    std::string name;
    if (is_pn_chars_base(peek())) {
      name += advance();
      while (is_pn_chars(peek()) ||
             (peek() == '.' && (is_pn_chars(peek(1)) || peek(1) == '.')))
        name += advance();
    }
    return name;
  }

  void triples() {
    skip_ws();
    Term subject;
    if (peek() == '[') {
      subject = blank_node_property_list();
      skip_ws();
      if (peek() == '.') return;  // bare [ ... ] . statement
      predicate_object_list(subject);
    } else if (peek() == '(') {
      subject = collection();
      predicate_object_list(subject);
    } else {
      subject = parse_subject();
      predicate_object_list(subject);
    }
  }

  Term parse_subject() {
    Term t = parse_term(false);
    if (t.is_literal()) fail("literal cannot be a subject");
    return t;
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      skip_ws();
      Term predicate = parse_predicate();
      object_list(subject, predicate);
      skip_ws();
      if (peek() == ';') {
        advance();
        skip_ws();
        // trailing ';' before '.', ']' is allowed
        if (peek() == '.' || peek() == ']' || peek() == ';') {
          while (peek() == ';') {
            advance();
            skip_ws();
          }
          if (peek() == '.' || peek() == ']') return;
        }
        continue;
      }
      return;
    }
  }

  Term parse_predicate() {
    if (peek() == 'a' && !is_pn_chars(peek(1)) && peek(1) != ':')
      {
        advance();
        return Term::iri(kRdfType);
      }
    Term t = parse_term(false);
    if (!t.is_iri()) fail("predicate must be an IRI");
    return t;
  }

  void object_list(const Term& subject, const Term& predicate) {
    while (true) {
      skip_ws();
      Term object = parse_object();
      graph_.insert(subject, predicate, object);
      skip_ws();
      if (peek() == ',') {
        advance();
        continue;
      }
      return;
    }
  }

  Term parse_object() {
    char c = peek();
    if (c == '[') return blank_node_property_list();
    if (c == '(') return collection();
    return parse_term(true);
  }

  Term fresh_blank() {
    // '#' is not legal in user blank labels, so these never collide.
    return Term::blank("b#" + std::to_string(anon_counter_++));
  }

  Term blank_node_property_list() {
    if (++depth_ > kMaxNesting) fail("nesting too deep");
    expect('[');
    Term node = fresh_blank();
    skip_ws();
    if (peek() != ']') predicate_object_list(node);
    skip_ws();
    expect(']');
    --depth_;
    return node;
  }

  Term collection() {
    if (++depth_ > kMaxNesting) fail("nesting too deep");
    expect('(');
    std::vector<Term> items;
    while (true) {
      skip_ws();
      if (peek() == ')') {
        advance();
        break;
      }
      if (eof()) fail("unterminated collection");
      items.push_back(parse_object());
    }
    --depth_;
    if (items.empty()) return Term::iri(kRdfNil);
    Term head = fresh_blank();
    Term current = head;
    for (std::size_t i = 0; i < items.size(); ++i) {
      graph_.insert(current, Term::iri(kRdfFirst), items[i]);
      if (i + 1 < items.size()) {
        Term next = fresh_blank();
        graph_.insert(current, Term::iri(kRdfRest), next);
        current = next;
      } else {
        graph_.insert(current, Term::iri(kRdfRest), Term::iri(kRdfNil));
      }
    }
    return head;
  }

  // Any term except [...] and (...).
  Term parse_term(bool allow_literal) {
    skip_ws();
    char c = peek();
    if (c == '<') return Term::iri(parse_iri());
    if (c == '_' && peek(1) == ':') return parse_blank_label();
    if (allow_literal) {
      if (c == '"' || c == '\'') return parse_string_literal();
      if (c == '+' || c == '-' ||
          std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
        return parse_numeric_literal();
      if (match_keyword("true"))
        return Term::literal("true", xsd::boolean);
      if (match_keyword("false"))
        return Term::literal("false", xsd::boolean);
    }
    if (is_pn_chars_base(c) || c == ':') return parse_prefixed_name();
    if (eof()) fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string parse_iri() {
    std::string raw = parse_iriref();
    return raw;
  }

  // Reads <...>, decodes \u escapes, resolves against base when relative.
  std::string parse_iriref() {
    expect('<');
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
      } else if (c == ' ' || c == '<' || c == '"' || c == '{' || c == '}' ||
                 c == '|' || c == '^' || c == '`' ||
                 static_cast<unsigned char>(c) <= 0x20) {
        fail("illegal character in IRI");
      } else {
        out += c;
      }
    }
    if (is_absolute_iri(out)) return out;
    if (!base_) fail("relative IRI without base: <" + out + ">");
    return resolve_iri(*base_, out);
  }

  unsigned long parse_hex(int digits) {
    unsigned long cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (eof()) fail("truncated \\u escape");
      char c = advance();
      cp <<= 4;
      if (c >= '0' && c <= '9')
        cp += static_cast<unsigned long>(c - '0');
      else if (c >= 'a' && c <= 'f')
        cp += static_cast<unsigned long>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F')
        cp += static_cast<unsigned long>(c - 'A' + 10);
      else
        fail("invalid hex digit in escape");
    }
    return cp;
  }

  Term parse_blank_label() {
    advance();  // _
    advance();  // :
    std::string label;
    char c = peek();
    if (!(is_pn_chars(c) || std::isdigit(static_cast<unsigned char>(c))))
      fail("invalid blank node label");
    label += advance();
    while (true) {
      c = peek();
      if (is_pn_chars(c)) {
        label += advance();
      } else if (c == '.' && is_pn_chars(peek(1))) {
        label += advance();
      } else {
        break;
      }
    }
    return Term::blank(label);
  }

  Term parse_prefixed_name() {
    std::string prefix = parse_prefix_name();
    if (peek() != ':') fail("expected ':' in prefixed name");
    advance();
    std::string local = parse_pn_local();
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail("undefined prefix '" + prefix + ":'");
    return Term::iri(it->second + local);
  }

  std::string parse_pn_local() {
    std::string local;
    auto local_start = [&](char c) {
      return is_pn_chars(c) || c == ':' || c == '%' || c == '\\' ||
             std::isdigit(static_cast<unsigned char>(c));
    };
    if (!local_start(peek())) return local;
    while (true) {
      char c = peek();
      if (is_pn_chars(c) || c == ':') {
        local += advance();
      } else if (c == '%') {
        advance();
        char h1 = advance(), h2 = advance();
        if (!std::isxdigit(static_cast<unsigned char>(h1)) ||
            !std::isxdigit(static_cast<unsigned char>(h2)))
          fail("invalid percent escape in local name");
        local += '%';
        local += h1;
        local += h2;
      } else if (c == '\\') {
        advance();
        char e = advance();
        static const std::string allowed = "_~.-!$&'()*+,;=/?#@%";
        if (allowed.find(e) == std::string::npos)
          fail("invalid local name escape");
        local += e;
      } else if (c == '.' && local_start(peek(1))) {
        local += advance();
      } else {
        break;
      }
    }
    return local;
  }

  Term parse_string_literal() {
    std::string lexical = parse_string_body();
    skip_ws();
    if (peek() == '@') {
      advance();
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')
        lang += advance();
      if (lang.empty()) fail("empty language tag");
      return Term::lang_literal(lexical, lang);
    }
    if (peek() == '^' && peek(1) == '^') {
      advance();
      advance();
      skip_ws();
      Term dt = parse_term(false);
      if (!dt.is_iri()) fail("datatype must be an IRI");
      return Term::literal(lexical, dt.value);
    }
    return Term::literal(lexical);
  }

  std::string parse_string_body() {
    char quote = advance();  // " or '
    bool long_form = false;
    if (peek() == quote && peek(1) == quote) {
      advance();
      advance();
      long_form = true;
    } else if (peek() == quote) {
      advance();
      return "";
    }
    std::string out;
    while (true) {
      if (eof()) fail("unterminated string literal");
      char c = peek();
      if (c == quote) {
        if (!long_form) {
          advance();
          return out;
        }
        if (peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          return out;
        }
        out += advance();
        continue;
      }
      if (!long_form && (c == '\n' || c == '\r'))
        fail("newline in single-line string");
      advance();
      if (c == '\\') {
        char e = advance();
        switch (e) {
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u': append_utf8(out, parse_hex(4)); break;
          case 'U': append_utf8(out, parse_hex(8)); break;
          default: fail("invalid string escape");
        }
      } else {
        out += c;
      }
    }
  }

  Term parse_numeric_literal() {
    std::string lex;
    bool has_dot = false, has_exp = false;
    if (peek() == '+' || peek() == '-') lex += advance();
    while (true) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex += advance();
      } else if (c == '.' && !has_dot && !has_exp &&
                 std::isdigit(static_cast<unsigned char>(peek(1)))) {
        has_dot = true;
        lex += advance();
      } else if ((c == 'e' || c == 'E') && !has_exp) {
        has_exp = true;
        lex += advance();
        if (peek() == '+' || peek() == '-') lex += advance();
      } else {
        break;
      }
    }
    if (lex.empty() || !std::isdigit(static_cast<unsigned char>(lex.back())))
      fail("malformed numeric literal");
    if (has_exp) return Term::literal(lex, xsd::double_);
    if (has_dot) return Term::literal(lex, xsd::decimal);
    return Term::literal(lex, xsd::integer);
  }
};

}  // namespace

Graph parse_turtle(const std::string& text,
                   const std::optional<std::string>& base) {
  return TurtleParser(text, base).parse();
}

}  // namespace kgf::rdf
