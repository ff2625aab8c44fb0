#include "kgf/query/parser.hpp"

#include <cctype>
#include <map>
#include <set>

#include "kgf/error.hpp"
#include "kgf/rdf/iri.hpp"

namespace kgf::query {

namespace {

using rdf::Term;

const std::set<std::string> kUnsupported = {
    "SERVICE", "MINUS",  "BIND",   "VALUES", "EXISTS",   "GRAPH",
    "DESCRIBE", "INSERT", "DELETE", "LOAD",   "CLEAR",    "DROP",
    "CREATE",   "WITH",   "SUM",    "AVG",    "MIN",      "MAX",
    "SAMPLE",   "GROUP_CONCAT",     "HAVING", "REDUCED",  "FROM",
    "NAMED",    "EXPLAIN"};

struct Token {
  enum Kind {
    End, Iri, PName, Var, String, Integer, Decimal, Double,
    Keyword, Punct
  };
  Kind kind = End;
  std::string text;       // keyword uppercased; punct literal; var w/o '?'
  std::string aux;        // pname local part
  std::size_t line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance_token(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance_token();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(current_.line, current_.col, msg);
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  Token current_;

  char peek_char(std::size_t n = 0) const {
    return pos_ + n < text_.size() ? text_[pos_ + n] : '\0';
  }
  char next_char() {
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
    while (pos_ < text_.size()) {
      char c = peek_char();
      if (c == '#') {
        while (pos_ < text_.size() && peek_char() != '\n') next_char();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        next_char();
      } else {
        break;
      }
    }
  }

  // Distinguishes <http://...> from the '<' operator: an IRIREF must reach
  // '>' without whitespace or quote characters.
  bool looks_like_iri() const {
    for (std::size_t i = pos_ + 1; i < text_.size(); ++i) {
      char c = text_[i];
      if (c == '>') return true;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '"' ||
          c == '<')
        return false;
    }
    return false;
  }

  void advance_token() {
    skip_ws();
    current_ = Token{};
    current_.line = line_;
    current_.col = col_;
    if (pos_ >= text_.size()) return;
    char c = peek_char();

    if (c == '<' && looks_like_iri()) {
      next_char();
      std::string iri;
      while (true) {
        if (pos_ >= text_.size())
          throw parse_error(line_, col_, "unterminated IRI");
        char ch = next_char();
        if (ch == '>') break;
        iri += ch;
      }
      current_.kind = Token::Iri;
      current_.text = iri;
      return;
    }
    if (c == '?' || c == '$') {
      next_char();
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(peek_char())) ||
             peek_char() == '_')
        name += next_char();
      if (name.empty()) throw parse_error(line_, col_, "empty variable name");
      current_.kind = Token::Var;
      current_.text = name;
      return;
    }
    if (c == '"' || c == '\'') {
      char quote = next_char();
      std::string s;
      while (true) {
        if (pos_ >= text_.size())
          throw parse_error(line_, col_, "unterminated string");
        char ch = next_char();
        if (ch == quote) break;
        if (ch == '\\') {
          char e = next_char();
          switch (e) {
            case 't': s += '\t'; break;
            case 'n': s += '\n'; break;
            case 'r': s += '\r'; break;
            case '"': s += '"'; break;
            case '\'': s += '\''; break;
            case '\\': s += '\\'; break;
            default:
              throw parse_error(line_, col_, "invalid string escape");
          }
        } else {
          s += ch;
        }
      }
      current_.kind = Token::String;
      current_.text = s;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '+' || c == '-') &&
         std::isdigit(static_cast<unsigned char>(peek_char(1))))) {
      std::string num;
      if (c == '+' || c == '-') num += next_char();
      bool dot = false, exp = false;
      while (true) {
        char ch = peek_char();
        if (std::isdigit(static_cast<unsigned char>(ch))) {
          num += next_char();
        } else if (ch == '.' && !dot && !exp &&
                   std::isdigit(static_cast<unsigned char>(peek_char(1)))) {
          dot = true;
          num += next_char();
        } else if ((ch == 'e' || ch == 'E') && !exp) {
          exp = true;
          num += next_char();
          if (peek_char() == '+' || peek_char() == '-') num += next_char();
        } else {
          break;
        }
      }
      current_.kind = exp ? Token::Double : dot ? Token::Decimal
                                                : Token::Integer;
      current_.text = num;
      return;
    }
    // barewords: keywords, 'a', prefixed names, booleans
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek_char())) ||
             peek_char() == '_' || peek_char() == '-' ||
             peek_char() == '.' )
        {
          if (peek_char() == '.' &&
              !(std::isalnum(static_cast<unsigned char>(peek_char(1))) ||
                peek_char(1) == '_'))
            break;
          word += next_char();
        }
      if (peek_char() == ':') {
        next_char();
        std::string local;
        while (std::isalnum(static_cast<unsigned char>(peek_char())) ||
               peek_char() == '_' || peek_char() == '-' ||
               (peek_char() == '.' &&
                (std::isalnum(static_cast<unsigned char>(peek_char(1))) ||
                 peek_char(1) == '_')))
          local += next_char();
        current_.kind = Token::PName;
        current_.text = word;
        current_.aux = local;
        return;
      }
      if (word.empty()) {
        // bare ':' handled above as PName with empty prefix
        next_char();
        current_.kind = Token::PName;
        return;
      }
      std::string upper;
      for (char ch : word)
        upper += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      current_.kind = Token::Keyword;
      current_.text = upper;
      current_.aux = word;  // original spelling ('a', 'true'...)
      return;
    }
    // punctuation / operators
    static const char* two_char[] = {"&&", "||", "!=", "<=", ">=", "^^"};
    for (const char* op : two_char) {
      if (c == op[0] && peek_char(1) == op[1]) {
        next_char();
        next_char();
        current_.kind = Token::Punct;
        current_.text = op;
        return;
      }
    }
    next_char();
    current_.kind = Token::Punct;
    current_.text = std::string(1, c);
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Query parse() {
    prologue();
    Token t = lex_.peek();
    if (t.kind != Token::Keyword) lex_.fail("expected query form");
    check_supported(t.text);
    Query q;
    if (t.text == "SELECT") {
      lex_.take();
      parse_select(q);
    } else if (t.text == "ASK") {
      lex_.take();
      q.form = QueryForm::Ask;
      q.pattern = parse_group();
    } else if (t.text == "CONSTRUCT") {
      lex_.take();
      q.form = QueryForm::Construct;
      q.construct_template = parse_template();
      expect_keyword("WHERE");
      q.pattern = parse_group();
      parse_modifiers(q);
    } else {
      lex_.fail("expected SELECT, ASK or CONSTRUCT");
    }
    if (lex_.peek().kind != Token::End) lex_.fail("trailing content");
    validate(q);
    return q;
  }

 private:
  Lexer lex_;
  std::map<std::string, std::string> prefixes_;

  void check_supported(const std::string& kw) {
    if (kUnsupported.count(kw)) throw unsupported_feature(kw);
  }

  void prologue() {
    while (lex_.peek().kind == Token::Keyword) {
      if (lex_.peek().text == "PREFIX") {
        lex_.take();
        Token name = lex_.take();
        if (name.kind != Token::PName || !name.aux.empty())
          lex_.fail("expected prefix name");
        Token iri = lex_.take();
        if (iri.kind != Token::Iri) lex_.fail("expected namespace IRI");
        prefixes_[name.text] = iri.text;
      } else if (lex_.peek().text == "BASE") {
        throw unsupported_feature("BASE");
      } else {
        return;
      }
    }
  }

  void expect_punct(const std::string& p) {
    Token t = lex_.take();
    if (t.kind != Token::Punct || t.text != p)
      throw parse_error(t.line, t.col, "expected '" + p + "'");
  }
  void expect_keyword(const std::string& kw) {
    Token t = lex_.take();
    if (t.kind != Token::Keyword || t.text != kw)
      throw parse_error(t.line, t.col, "expected " + kw);
  }
  bool at_punct(const std::string& p) {
    return lex_.peek().kind == Token::Punct && lex_.peek().text == p;
  }
  bool at_keyword(const std::string& kw) {
    return lex_.peek().kind == Token::Keyword && lex_.peek().text == kw;
  }

  void parse_select(Query& q) {
    q.form = QueryForm::Select;
    if (at_keyword("DISTINCT")) {
      lex_.take();
      q.distinct = true;
    }
    if (at_punct("*")) {
      lex_.take();
      q.select_all = true;
    } else {
      while (true) {
        if (lex_.peek().kind == Token::Var) {
          q.projection.push_back(lex_.take().text);
        } else if (at_punct("(")) {
          lex_.take();
          q.aggregates.push_back(parse_count());
        } else {
          break;
        }
      }
      if (q.projection.empty() && q.aggregates.empty())
        lex_.fail("empty projection");
    }
    if (at_keyword("WHERE")) lex_.take();
    q.pattern = parse_group();
    parse_modifiers(q);
  }

  CountAggregate parse_count() {
    Token t = lex_.take();
    if (t.kind != Token::Keyword) check_supported("");
    check_supported(t.text);
    if (t.text != "COUNT")
      throw parse_error(t.line, t.col, "expected COUNT");
    CountAggregate agg;
    expect_punct("(");
    if (at_keyword("DISTINCT")) {
      lex_.take();
      agg.distinct = true;
    }
    if (at_punct("*")) {
      lex_.take();
    } else {
      Token v = lex_.take();
      if (v.kind != Token::Var)
        throw parse_error(v.line, v.col, "expected variable or *");
      agg.var = v.text;
    }
    expect_punct(")");
    expect_keyword("AS");
    Token alias = lex_.take();
    if (alias.kind != Token::Var)
      throw parse_error(alias.line, alias.col, "expected alias variable");
    agg.alias = alias.text;
    expect_punct(")");
    return agg;
  }

  std::vector<TriplePattern> parse_template() {
    expect_punct("{");
    GroupPattern g;
    parse_triples_block(g);
    expect_punct("}");
    return g.triples;
  }

  GroupPattern parse_group() {
    expect_punct("{");
    GroupPattern group;
    while (!at_punct("}")) {
      Token t = lex_.peek();
      if (t.kind == Token::End) lex_.fail("unterminated group pattern");
      if (t.kind == Token::Keyword) {
        check_supported(t.text);
        if (t.text == "OPTIONAL") {
          lex_.take();
          group.optionals.push_back(parse_group());
          if (at_punct(".")) lex_.take();
          continue;
        }
        if (t.text == "FILTER") {
          lex_.take();
          bool parens = at_punct("(");
          group.filters.push_back(parse_expr());
          (void)parens;
          if (at_punct(".")) lex_.take();
          continue;
        }
        if (t.text == "SELECT") throw unsupported_feature("subquery");
      }
      if (at_punct("{")) {
        GroupPattern left = parse_group();
        if (at_keyword("UNION")) {
          GroupPattern right;
          bool first = true;
          while (at_keyword("UNION")) {
            lex_.take();
            GroupPattern alt = parse_group();
            if (first) {
              right = std::move(alt);
              first = false;
            } else {
              // chain: fold previous pair into a fresh left branch
              GroupPattern folded;
              folded.unions.emplace_back(std::move(left), std::move(right));
              left = std::move(folded);
              right = std::move(alt);
            }
          }
          group.unions.emplace_back(std::move(left), std::move(right));
        } else {
          // plain nested group: joined with the enclosing group
          merge_group(group, std::move(left));
        }
        if (at_punct(".")) lex_.take();
        continue;
      }
      parse_triples_block(group);
    }
    expect_punct("}");
    return group;
  }

  void merge_group(GroupPattern& into, GroupPattern from) {
    for (auto& t : from.triples) into.triples.push_back(std::move(t));
    for (auto& o : from.optionals) into.optionals.push_back(std::move(o));
    for (auto& u : from.unions) into.unions.push_back(std::move(u));
    for (auto& f : from.filters) into.filters.push_back(std::move(f));
  }

  void parse_triples_block(GroupPattern& group) {
    while (true) {
      Token t = lex_.peek();
      if (t.kind == Token::Punct && (t.text == "}" || t.text == "{")) return;
      if (t.kind == Token::Keyword &&
          (t.text == "OPTIONAL" || t.text == "FILTER" || t.text == "UNION"))
        return;
      if (t.kind == Token::End) return;
      PatternTerm subject = parse_pattern_term(false);
      while (true) {
        PatternTerm predicate = parse_pattern_term(true);
        while (true) {
          PatternTerm object = parse_pattern_term(false);
          group.triples.push_back({subject, predicate, object});
          if (at_punct(",")) {
            lex_.take();
            continue;
          }
          break;
        }
        if (at_punct(";")) {
          lex_.take();
          if (at_punct(".") || at_punct("}")) break;
          continue;
        }
        break;
      }
      if (at_punct(".")) {
        lex_.take();
        continue;
      }
      return;
    }
  }

  PatternTerm parse_pattern_term(bool predicate_position) {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Var:
        return PatternTerm::variable(t.text);
      case Token::Iri:
        return PatternTerm::concrete(Term::iri(expand_iri(t)));
      case Token::PName:
        if (t.text == "_")
          throw unsupported_feature("blank nodes in query patterns");
        return PatternTerm::concrete(Term::iri(expand_pname(t)));
      case Token::String:
        return PatternTerm::concrete(finish_literal(t));
      case Token::Integer:
        return PatternTerm::concrete(Term::literal(t.text, rdf::xsd::integer));
      case Token::Decimal:
        return PatternTerm::concrete(Term::literal(t.text, rdf::xsd::decimal));
      case Token::Double:
        return PatternTerm::concrete(Term::literal(t.text, rdf::xsd::double_));
      case Token::Keyword:
        if (t.aux == "a" && predicate_position)
          return PatternTerm::concrete(
              Term::iri(std::string(rdf::ns::rdf) + "type"));
        if (t.text == "TRUE" || t.text == "FALSE")
          return PatternTerm::concrete(
              Term::literal(t.text == "TRUE" ? "true" : "false",
                            rdf::xsd::boolean));
        check_supported(t.text);
        throw parse_error(t.line, t.col, "unexpected keyword " + t.aux);
      case Token::Punct:
        if (t.text == "_")
          throw unsupported_feature("blank nodes in query patterns");
        if (t.text == "[" || t.text == "(")
          throw unsupported_feature(t.text == "["
                                        ? "blank node property lists in queries"
                                        : "collections in queries");
        if (t.text == "^" || t.text == "/" || t.text == "*" || t.text == "+")
          throw unsupported_feature("property paths");
        throw parse_error(t.line, t.col, "unexpected '" + t.text + "'");
      default:
        throw parse_error(t.line, t.col, "expected term");
    }
  }

  // literal continuation: @lang or ^^datatype
  Term finish_literal(const Token& str) {
    if (at_punct("@")) {
      lex_.take();
      Token lang = lex_.take();
      if (lang.kind != Token::Keyword && lang.kind != Token::PName)
        throw parse_error(lang.line, lang.col, "expected language tag");
      return Term::lang_literal(str.text, lang.aux.empty() ? lang.text
                                                           : lang.aux);
    }
    if (at_punct("^^")) {
      lex_.take();
      Token dt = lex_.take();
      if (dt.kind == Token::Iri) return Term::literal(str.text, expand_iri(dt));
      if (dt.kind == Token::PName)
        return Term::literal(str.text, expand_pname(dt));
      throw parse_error(dt.line, dt.col, "expected datatype IRI");
    }
    return Term::literal(str.text);
  }

  std::string expand_iri(const Token& t) {
    if (!rdf::is_absolute_iri(t.text))
      throw parse_error(t.line, t.col, "relative IRI in query: <" + t.text + ">");
    return t.text;
  }

  std::string expand_pname(const Token& t) {
    auto it = prefixes_.find(t.text);
    if (it == prefixes_.end())
      throw parse_error(t.line, t.col, "undefined prefix '" + t.text + ":'");
    return it->second + t.aux;
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr left = parse_and();
    while (at_punct("||")) {
      lex_.take();
      auto node = std::make_shared<Expr>();
      node->kind = ExprKind::Or;
      node->args = {left, parse_and()};
      left = node;
    }
    return left;
  }

  ExprPtr parse_and() {
    ExprPtr left = parse_relational();
    while (at_punct("&&")) {
      lex_.take();
      auto node = std::make_shared<Expr>();
      node->kind = ExprKind::And;
      node->args = {left, parse_relational()};
      left = node;
    }
    return left;
  }

  ExprPtr parse_relational() {
    ExprPtr left = parse_unary();
    static const std::set<std::string> cmp = {"=", "!=", "<", "<=", ">", ">="};
    if (lex_.peek().kind == Token::Punct && cmp.count(lex_.peek().text)) {
      auto node = std::make_shared<Expr>();
      node->kind = ExprKind::Compare;
      node->op = lex_.take().text;
      node->args = {left, parse_unary()};
      return node;
    }
    if (at_keyword("IN")) {
      lex_.take();
      auto node = std::make_shared<Expr>();
      node->kind = ExprKind::In;
      node->args.push_back(left);
      expect_punct("(");
      if (!at_punct(")")) {
        while (true) {
          node->args.push_back(parse_unary());
          if (at_punct(",")) {
            lex_.take();
            continue;
          }
          break;
        }
      }
      expect_punct(")");
      return node;
    }
    return left;
  }

  ExprPtr parse_unary() {
    if (at_punct("!")) {
      lex_.take();
      auto node = std::make_shared<Expr>();
      node->kind = ExprKind::Not;
      node->args = {parse_unary()};
      return node;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    Token t = lex_.peek();
    auto node = std::make_shared<Expr>();
    if (t.kind == Token::Punct && t.text == "(") {
      lex_.take();
      ExprPtr inner = parse_expr();
      expect_punct(")");
      return inner;
    }
    if (t.kind == Token::Keyword) {
      if (t.text == "BOUND") {
        lex_.take();
        expect_punct("(");
        Token v = lex_.take();
        if (v.kind != Token::Var)
          throw parse_error(v.line, v.col, "BOUND expects a variable");
        expect_punct(")");
        node->kind = ExprKind::Bound;
        node->var = v.text;
        return node;
      }
      if (t.text == "REGEX") {
        lex_.take();
        expect_punct("(");
        node->kind = ExprKind::Regex;
        node->args.push_back(parse_expr());
        expect_punct(",");
        node->args.push_back(parse_expr());
        if (at_punct(",")) {
          lex_.take();
          node->args.push_back(parse_expr());
        }
        expect_punct(")");
        return node;
      }
      if (t.text == "TRUE" || t.text == "FALSE") {
        lex_.take();
        node->kind = ExprKind::Constant;
        node->term = Term::literal(t.text == "TRUE" ? "true" : "false",
                                   rdf::xsd::boolean);
        return node;
      }
      check_supported(t.text);
      throw unsupported_feature("function " + t.aux);
    }
    if (t.kind == Token::Var) {
      lex_.take();
      node->kind = ExprKind::Var;
      node->var = t.text;
      return node;
    }
    node->kind = ExprKind::Constant;
    PatternTerm pt = parse_pattern_term(false);
    if (pt.is_var) throw parse_error(t.line, t.col, "unexpected variable");
    node->term = pt.term;
    return node;
  }

  void parse_modifiers(Query& q) {
    if (at_keyword("GROUP")) {
      lex_.take();
      expect_keyword("BY");
      while (lex_.peek().kind == Token::Var)
        q.group_by.push_back(lex_.take().text);
      if (q.group_by.empty()) lex_.fail("GROUP BY needs variables");
    }
    if (at_keyword("HAVING")) throw unsupported_feature("HAVING");
    if (at_keyword("ORDER")) {
      lex_.take();
      expect_keyword("BY");
      while (true) {
        if (lex_.peek().kind == Token::Var) {
          q.order_by.push_back({lex_.take().text, true});
        } else if (at_keyword("ASC") || at_keyword("DESC")) {
          bool asc = lex_.take().text == "ASC";
          expect_punct("(");
          Token v = lex_.take();
          if (v.kind != Token::Var)
            throw parse_error(v.line, v.col, "expected variable");
          expect_punct(")");
          q.order_by.push_back({v.text, asc});
        } else {
          break;
        }
      }
      if (q.order_by.empty()) lex_.fail("ORDER BY needs keys");
    }
    // LIMIT/OFFSET in either order
    for (int i = 0; i < 2; ++i) {
      if (at_keyword("LIMIT")) {
        lex_.take();
        Token n = lex_.take();
        if (n.kind != Token::Integer || n.text[0] == '-')
          throw parse_error(n.line, n.col, "LIMIT expects a non-negative integer");
        q.limit = std::stoull(n.text);
      } else if (at_keyword("OFFSET")) {
        lex_.take();
        Token n = lex_.take();
        if (n.kind != Token::Integer || n.text[0] == '-')
          throw parse_error(n.line, n.col, "OFFSET expects a non-negative integer");
        q.offset = std::stoull(n.text);
      }
    }
  }

  static void collect_vars(const GroupPattern& g, std::set<std::string>& vars) {
    for (const auto& t : g.triples) {
      if (t.subject.is_var) vars.insert(t.subject.var);
      if (t.predicate.is_var) vars.insert(t.predicate.var);
      if (t.object.is_var) vars.insert(t.object.var);
    }
    for (const auto& o : g.optionals) collect_vars(o, vars);
    for (const auto& [l, r] : g.unions) {
      collect_vars(l, vars);
      collect_vars(r, vars);
    }
  }

  void validate(const Query& q) {
    std::set<std::string> vars;
    collect_vars(q.pattern, vars);
    for (const auto& v : q.projection)
      if (!vars.count(v))
        throw parse_error(1, 1, "projected variable ?" + v +
                                    " does not appear in the pattern");
    for (const auto& agg : q.aggregates)
      if (!agg.var.empty() && !vars.count(agg.var))
        throw parse_error(1, 1, "aggregated variable ?" + agg.var +
                                    " does not appear in the pattern");
    for (const auto& v : q.group_by)
      if (!vars.count(v))
        throw parse_error(1, 1, "GROUP BY variable ?" + v +
                                    " does not appear in the pattern");
  }
};

}  // namespace

Query parse_query(const std::string& text) { return Parser(text).parse(); }

}  // namespace kgf::query
