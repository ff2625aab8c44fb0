#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgf/rdf/graph.hpp"

namespace kgf::query {

/// A position in a triple pattern: either a variable or a concrete term.
struct PatternTerm {
  bool is_var = false;
  std::string var;   // without the leading '?'
  rdf::Term term;

  static PatternTerm variable(std::string name) {
    PatternTerm p;
    p.is_var = true;
    p.var = std::move(name);
    return p;
  }
  static PatternTerm concrete(rdf::Term t) {
    PatternTerm p;
    p.term = std::move(t);
    return p;
  }
};

struct TriplePattern {
  PatternTerm subject, predicate, object;
};

enum class ExprKind {
  Or, And, Not,
  Compare,   // op one of = != < <= > >=
  Bound,     // BOUND(?v)
  Regex,     // REGEX(arg0, arg1 [, arg2 flags])
  In,        // arg0 IN (arg1..argN)
  Constant,  // term
  Var
};

struct Expr {
  ExprKind kind = ExprKind::Constant;
  std::string op;
  std::vector<std::shared_ptr<Expr>> args;
  rdf::Term term;
  std::string var;
};
using ExprPtr = std::shared_ptr<Expr>;

struct GroupPattern {
  std::vector<TriplePattern> triples;
  std::vector<GroupPattern> optionals;
  std::vector<std::pair<GroupPattern, GroupPattern>> unions;
  std::vector<ExprPtr> filters;
};

enum class QueryForm { Select, Ask, Construct };

/// COUNT(...) AS alias; the only supported aggregate.
struct CountAggregate {
  bool distinct = false;
  std::string var;  // empty means COUNT(*)
  std::string alias;
};

struct OrderKey {
  std::string var;
  bool ascending = true;
};

struct Query {
  QueryForm form = QueryForm::Select;
  bool distinct = false;
  bool select_all = false;
  std::vector<std::string> projection;
  std::vector<CountAggregate> aggregates;
  std::vector<std::string> group_by;
  GroupPattern pattern;
  std::vector<TriplePattern> construct_template;
  std::vector<OrderKey> order_by;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> offset;
};

/// One solution row: variable name -> bound term (absent = unbound).
using Binding = std::map<std::string, rdf::Term>;

struct SolutionSequence {
  std::vector<std::string> variables;
  std::vector<Binding> rows;
};

}  // namespace kgf::query
