#include "kgf/map/mapping.hpp"

#include <sstream>

#include "kgf/error.hpp"
#include "kgf/query/eval.hpp"
#include "kgf/query/parser.hpp"
#include "kgf/rdf/iri.hpp"
#include "kgf/store/store.hpp"

namespace kgf::map {

namespace {

const std::string kRdfType =
    std::string(rdf::ns::rdf) + "type";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

/// Splits one line into tokens: bare words, quoted strings (kept with their
/// quotes), and <...> groups (kept with the angle brackets).
std::vector<std::string> tokenize_line(const std::string& line,
                                       std::size_t line_no) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (is_space(line[i])) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;  // comment to end of line
    std::size_t start = i;
    if (line[i] == '"') {
      ++i;
      while (i < line.size() && line[i] != '"') {
        if (line[i] == '\\' && i + 1 < line.size()) ++i;
        ++i;
      }
      if (i >= line.size())
        throw parse_error(line_no, start + 1, "unterminated string");
      ++i;
    } else if (line[i] == '<') {
      while (i < line.size() && line[i] != '>') ++i;
      if (i >= line.size())
        throw parse_error(line_no, start + 1, "unterminated '<...>' template");
      ++i;
    } else {
      while (i < line.size() && !is_space(line[i])) ++i;
    }
    out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string unquote(const std::string& token) {
  std::string out;
  for (std::size_t i = 1; i + 1 < token.size(); ++i) {
    if (token[i] == '\\' && i + 2 < token.size()) ++i;
    out += token[i];
  }
  return out;
}

/// Resolves `<iri>` or `prefix:local` to an absolute IRI string.
std::string resolve_iri_token(const std::string& token,
                              const std::map<std::string, std::string>& prefixes,
                              std::size_t line_no) {
  if (token.size() >= 2 && token.front() == '<' && token.back() == '>')
    return token.substr(1, token.size() - 2);
  auto colon = token.find(':');
  if (colon == std::string::npos)
    throw parse_error(line_no, 1,
                      "expected IRI or prefixed name, got '" + token + "'");
  std::string prefix = token.substr(0, colon);
  auto it = prefixes.find(prefix);
  if (it == prefixes.end())
    throw parse_error(line_no, 1, "unknown prefix '" + prefix + ":'");
  return it->second + token.substr(colon + 1);
}

/// Parses the object part of a statement starting at tokens[pos].
TermTemplate parse_object(const std::vector<std::string>& tokens,
                          std::size_t pos,
                          const std::map<std::string, std::string>& prefixes,
                          std::size_t line_no) {
  if (pos >= tokens.size())
    throw parse_error(line_no, 1, "statement is missing an object");
  const std::string& form = tokens[pos];
  TermTemplate t;
  if (form == "iri") {
    if (pos + 1 >= tokens.size())
      throw parse_error(line_no, 1, "'iri' needs a <template>");
    std::string tpl =
        resolve_iri_token(tokens[pos + 1], prefixes, line_no);
    auto pieces = tokenize_template(tpl);
    t.text = tpl;
    for (const auto& [lit, col] : pieces)
      if (!col.empty()) t.placeholders.push_back(col);
    t.kind = t.placeholders.empty() ? TermTemplate::Kind::ConstantIri
                                    : TermTemplate::Kind::IriTemplate;
    if (pos + 2 < tokens.size())
      throw parse_error(line_no, 1,
                        "unexpected token '" + tokens[pos + 2] + "'");
    return t;
  }
  if (form == "blank") {
    t.kind = TermTemplate::Kind::RowBlank;
    if (pos + 1 < tokens.size())
      throw parse_error(line_no, 1,
                        "unexpected token '" + tokens[pos + 1] + "'");
    return t;
  }
  if (form != "literal")
    throw parse_error(line_no, 1,
                      "expected 'iri', 'literal', or 'blank', got '" + form +
                          "'");
  if (pos + 1 >= tokens.size())
    throw parse_error(line_no, 1, "'literal' needs a value");
  const std::string& val = tokens[pos + 1];
  if (val.size() >= 2 && val.front() == '{' && val.back() == '}') {
    t.kind = TermTemplate::Kind::ColumnLiteral;
    t.column = val.substr(1, val.size() - 2);
    if (t.column.empty())
      throw parse_error(line_no, 1, "empty column placeholder '{}'");
  } else if (val.size() >= 2 && val.front() == '"' && val.back() == '"') {
    t.kind = TermTemplate::Kind::ConstantLiteral;
    t.text = unquote(val);
  } else {
    throw parse_error(line_no, 1,
                      "literal value must be {column} or \"text\", got '" +
                          val + "'");
  }
  for (std::size_t i = pos + 2; i < tokens.size(); ++i) {
    const std::string& mod = tokens[i];
    if (mod.rfind("^^", 0) == 0) {
      t.datatype = resolve_iri_token(mod.substr(2), prefixes, line_no);
    } else if (mod.size() > 1 && mod[0] == '@') {
      t.language = mod.substr(1);
    } else {
      throw parse_error(line_no, 1, "unexpected token '" + mod + "'");
    }
  }
  if (!t.language.empty() && !t.datatype.empty())
    throw parse_error(line_no, 1,
                      "a literal cannot have both @lang and ^^datatype");
  return t;
}

RowFilter parse_filter(const std::vector<std::string>& tokens,
                       std::size_t line_no) {
  // when <col> present|absent | = "v" | != "v"
  if (tokens.size() < 3)
    throw parse_error(line_no, 1, "'when' needs a column and a condition");
  RowFilter f;
  f.column = tokens[1];
  const std::string& op = tokens[2];
  if (op == "present" || op == "absent") {
    if (tokens.size() != 3)
      throw parse_error(line_no, 1, "unexpected token after '" + op + "'");
    f.op = op == "present" ? RowFilter::Op::Present : RowFilter::Op::Absent;
    return f;
  }
  if ((op == "=" || op == "!=") && tokens.size() == 4 &&
      tokens[3].size() >= 2 && tokens[3].front() == '"') {
    f.op = op == "=" ? RowFilter::Op::Eq : RowFilter::Op::Ne;
    f.value = unquote(tokens[3]);
    return f;
  }
  throw parse_error(line_no, 1,
                    "condition must be present, absent, = \"v\", or != \"v\"");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> tokenize_template(
    const std::string& tpl) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string lit;
  std::size_t i = 0;
  while (i < tpl.size()) {
    char c = tpl[i];
    if (c == '}') throw config_error("unbalanced '}' in template '" + tpl + "'");
    if (c != '{') {
      lit += c;
      ++i;
      continue;
    }
    auto end = tpl.find('}', i);
    if (end == std::string::npos)
      throw config_error("unbalanced '{' in template '" + tpl + "'");
    std::string col = tpl.substr(i + 1, end - i - 1);
    if (col.empty())
      throw config_error("empty placeholder '{}' in template '" + tpl + "'");
    out.push_back({lit, col});
    lit.clear();
    i = end + 1;
  }
  if (!lit.empty() || out.empty()) out.push_back({lit, ""});
  return out;
}

std::string percent_encode(const std::string& value) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : value) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
        (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
        c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

MappingPlan compile_mapping(const std::string& document) {
  MappingPlan plan;
  std::istringstream in(document);
  std::string line;
  std::size_t line_no = 0;
  MappingRule* current = nullptr;
  bool in_rule = false;
  MappingRule rule;
  bool have_subject = false;

  auto finish_rule = [&]() {
    if (!have_subject)
      throw parse_error(line_no, 1,
                        "rule '" + rule.name + "' has no subject line");
    plan.rules.push_back(rule);
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize_line(line, line_no);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0];

    if (!in_rule) {
      if (head == "prefix") {
        if (tokens.size() != 3 || tokens[1].empty() ||
            tokens[1].back() != ':' || tokens[2].front() != '<')
          throw parse_error(line_no, 1,
                            "expected: prefix name: <namespace-iri>");
        std::string name = tokens[1].substr(0, tokens[1].size() - 1);
        plan.prefixes[name] =
            tokens[2].substr(1, tokens[2].size() - 2);
      } else if (head == "rule") {
        if (tokens.size() != 4 || tokens[2] != "from")
          throw parse_error(line_no, 1,
                            "expected: rule <name> from <table>");
        rule = MappingRule{};
        rule.name = tokens[1];
        rule.source = tokens[3];
        have_subject = false;
        in_rule = true;
      } else {
        throw parse_error(line_no, 1,
                          "expected 'prefix' or 'rule', got '" + head + "'");
      }
      continue;
    }

    if (head == "end") {
      if (tokens.size() != 1)
        throw parse_error(line_no, 1, "unexpected token after 'end'");
      finish_rule();
      in_rule = false;
    } else if (head == "subject") {
      try {
        rule.subject = parse_object(tokens, 1, plan.prefixes, line_no);
      } catch (const config_error& e) {
        throw parse_error(line_no, 1, e.what());
      }
      if (rule.subject.kind == TermTemplate::Kind::ColumnLiteral ||
          rule.subject.kind == TermTemplate::Kind::ConstantLiteral)
        throw parse_error(line_no, 1, "a subject cannot be a literal");
      have_subject = true;
    } else if (head == "type") {
      if (tokens.size() != 2)
        throw parse_error(line_no, 1, "expected: type <class>");
      TermTemplate cls;
      cls.kind = TermTemplate::Kind::ConstantIri;
      cls.text = resolve_iri_token(tokens[1], plan.prefixes, line_no);
      rule.statements.push_back({kRdfType, cls});
    } else if (head == "when") {
      rule.filters.push_back(parse_filter(tokens, line_no));
    } else {
      std::string pred = resolve_iri_token(head, plan.prefixes, line_no);
      TermTemplate obj;
      try {
        obj = parse_object(tokens, 1, plan.prefixes, line_no);
      } catch (const config_error& e) {
        throw parse_error(line_no, 1, e.what());
      }
      if (obj.kind == TermTemplate::Kind::RowBlank)
        throw parse_error(line_no, 1,
                          "'blank' objects are not supported in statements");
      rule.statements.push_back({pred, obj});
    }
  }
  if (in_rule)
    throw parse_error(line_no, 1, "rule '" + rule.name + "' missing 'end'");
  if (plan.rules.empty())
    throw parse_error(line_no ? line_no : 1, 1,
                      "mapping document declares no rules");
  return plan;
}

namespace {

struct RowContext {
  const prep::Table* table = nullptr;
  const std::vector<prep::Cell>* row = nullptr;
  std::map<std::string, std::size_t> column_indexes;
};

/// Instantiates a template for one row. On a null cell or a non-absolute
/// substituted IRI, returns nullopt and sets skip_column/skip_reason.
std::optional<rdf::Term> instantiate(const TermTemplate& t,
                                     const RowContext& ctx,
                                     const std::string& rule_name,
                                     std::size_t row_index,
                                     std::string& skip_column,
                                     std::string& skip_reason) {
  switch (t.kind) {
    case TermTemplate::Kind::ConstantIri:
      return rdf::Term::iri(t.text);
    case TermTemplate::Kind::ConstantLiteral:
      if (!t.language.empty())
        return rdf::Term::lang_literal(t.text, t.language);
      return rdf::Term::literal(
          t.text, t.datatype.empty() ? rdf::xsd::string_ : t.datatype);
    case TermTemplate::Kind::RowBlank:
      return rdf::Term::blank(rule_name + "." + std::to_string(row_index));
    case TermTemplate::Kind::ColumnLiteral: {
      const auto& cell = (*ctx.row)[ctx.column_indexes.at(t.column)];
      if (!cell) {
        skip_column = t.column;
        skip_reason = "null cell";
        return std::nullopt;
      }
      if (!t.language.empty())
        return rdf::Term::lang_literal(*cell, t.language);
      return rdf::Term::literal(
          *cell, t.datatype.empty() ? rdf::xsd::string_ : t.datatype);
    }
    case TermTemplate::Kind::IriTemplate: {
      std::string iri;
      for (const auto& [lit, col] : tokenize_template(t.text)) {
        iri += lit;
        if (col.empty()) continue;
        const auto& cell = (*ctx.row)[ctx.column_indexes.at(col)];
        if (!cell) {
          skip_column = col;
          skip_reason = "null cell";
          return std::nullopt;
        }
        iri += percent_encode(*cell);
      }
      if (!rdf::is_absolute_iri(iri)) {
        skip_column = t.placeholders.empty() ? "" : t.placeholders.front();
        skip_reason = "substituted IRI '" + iri + "' is not absolute";
        return std::nullopt;
      }
      return rdf::Term::iri(iri);
    }
  }
  return std::nullopt;
}

bool passes_filters(const MappingRule& rule, const RowContext& ctx) {
  for (const auto& f : rule.filters) {
    const auto& cell = (*ctx.row)[ctx.column_indexes.at(f.column)];
    switch (f.op) {
      case RowFilter::Op::Present:
        if (!cell) return false;
        break;
      case RowFilter::Op::Absent:
        if (cell) return false;
        break;
      case RowFilter::Op::Eq:
        if (!cell || *cell != f.value) return false;
        break;
      case RowFilter::Op::Ne:
        if (!cell || *cell == f.value) return false;
        break;
    }
  }
  return true;
}

}  // namespace

std::pair<rdf::Graph, MappingLog> apply_mapping(
    const MappingPlan& plan, const std::map<std::string, prep::Table>& tables) {
  // Pre-flight: every source table and every referenced column must exist.
  std::vector<std::pair<const MappingRule*, RowContext>> prepared;
  for (const auto& rule : plan.rules) {
    auto it = tables.find(rule.source);
    if (it == tables.end())
      throw config_error("rule '" + rule.name + "' reads missing table '" +
                         rule.source + "'");
    RowContext ctx;
    ctx.table = &it->second;
    std::vector<std::string> needed = rule.subject.columns();
    for (const auto& st : rule.statements)
      for (const auto& c : st.object.columns()) needed.push_back(c);
    for (const auto& f : rule.filters) needed.push_back(f.column);
    for (const auto& col : needed) {
      auto idx = ctx.table->column_index(col);
      if (!idx)
        throw config_error("rule '" + rule.name + "' references column '" +
                           col + "' absent from table '" + rule.source + "'");
      ctx.column_indexes[col] = *idx;
    }
    prepared.push_back({&rule, std::move(ctx)});
  }

  rdf::Graph graph;
  MappingLog log;
  for (auto& [rule, ctx] : prepared) {
    for (std::size_t r = 0; r < ctx.table->rows.size(); ++r) {
      ctx.row = &ctx.table->rows[r];
      ++log.rows_processed;
      if (!passes_filters(*rule, ctx)) {
        ++log.rows_filtered;
        continue;
      }
      std::string skip_col, skip_reason;
      auto subject =
          instantiate(rule->subject, ctx, rule->name, r, skip_col, skip_reason);
      if (!subject) {
        log.skipped_statements.push_back(
            {rule->name, r, skip_col, "subject skipped: " + skip_reason});
        continue;
      }
      for (const auto& st : rule->statements) {
        skip_col.clear();
        skip_reason.clear();
        auto object =
            instantiate(st.object, ctx, rule->name, r, skip_col, skip_reason);
        if (!object) {
          log.skipped_statements.push_back(
              {rule->name, r, skip_col, skip_reason});
          continue;
        }
        ++log.triples_emitted;
        if (!graph.insert({*subject, rdf::Term::iri(st.predicate), *object}))
          ++log.duplicates_collapsed;
      }
    }
  }
  return {std::move(graph), std::move(log)};
}

std::vector<IntegrityResult> run_integrity_queries(
    const rdf::Graph& graph, const std::vector<IntegrityQuery>& queries) {
  store::TripleStore store;
  store.import(graph);
  std::vector<IntegrityResult> out;
  for (const auto& q : queries) {
    IntegrityResult r;
    r.name = q.name;
    try {
      auto parsed = query::parse_query(q.text);
      auto result = query::evaluate(parsed, store);
      if (result.form == query::QueryForm::Ask) {
        r.passed = result.boolean;
        r.detail = result.boolean ? "true" : "false";
      } else if (result.form == query::QueryForm::Select) {
        std::size_t n = result.solutions.rows.size();
        r.passed = q.expect_empty ? n == 0 : n > 0;
        r.detail = std::to_string(n) + " rows";
      } else {
        r.passed = false;
        r.detail = "integrity queries must be ASK or SELECT";
      }
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("query failed: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace kgf::map
