#include "kgf/query/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <regex>
#include <set>

namespace kgf::query {

namespace {

using rdf::Term;
using store::TripleStore;

bool is_numeric_datatype(const std::string& dt) {
  return dt == rdf::xsd::integer || dt == rdf::xsd::decimal ||
         dt == rdf::xsd::double_;
}

std::optional<double> to_double(const Term& t) {
  if (!t.is_literal() || !is_numeric_datatype(t.datatype)) return std::nullopt;
  const char* begin = t.value.data();
  const char* end = begin + t.value.size();
  double v = 0;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

bool is_date_datatype(const std::string& dt) {
  return dt == rdf::xsd::date || dt == rdf::xsd::dateTime;
}

bool is_plain_string(const Term& t) {
  return t.is_literal() && t.language.empty() && t.datatype == rdf::xsd::string_;
}

// --- FILTER expression evaluation; nullopt = evaluation error ---

struct ExprError {};

std::optional<Term> eval_term(const Expr& e, const Binding& row);

std::optional<bool> eval_bool(const Expr& e, const Binding& row);

// effective boolean value
std::optional<bool> ebv(const Term& t) {
  if (!t.is_literal()) return std::nullopt;
  if (t.datatype == rdf::xsd::boolean) {
    if (t.value == "true" || t.value == "1") return true;
    if (t.value == "false" || t.value == "0") return false;
    return std::nullopt;
  }
  if (is_numeric_datatype(t.datatype)) {
    auto v = to_double(t);
    if (!v) return false;  // malformed numeric literal has EBV false
    return *v != 0.0;
  }
  if (t.datatype == rdf::xsd::string_ || !t.language.empty())
    return !t.value.empty();
  return std::nullopt;
}

std::optional<int> compare_terms(const Term& a, const Term& b) {
  // numeric comparison promotes everything to double
  auto da = to_double(a), db = to_double(b);
  if (da && db) return *da < *db ? -1 : *da > *db ? 1 : 0;
  if (a.is_literal() && b.is_literal()) {
    bool strings = (is_plain_string(a) && is_plain_string(b)) ||
                   (!a.language.empty() && a.language == b.language);
    bool dates = is_date_datatype(a.datatype) && a.datatype == b.datatype;
    bool booleans =
        a.datatype == rdf::xsd::boolean && b.datatype == rdf::xsd::boolean;
    if (strings || dates || booleans) {
      int c = a.value.compare(b.value);
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
  }
  return std::nullopt;  // not order-comparable
}

std::optional<bool> eval_equals(const Expr& lhs, const Expr& rhs,
                                const Binding& row) {
  auto a = eval_term(lhs, row);
  auto b = eval_term(rhs, row);
  if (!a || !b) return std::nullopt;
  auto da = to_double(*a), db = to_double(*b);
  if (da && db) return *da == *db;
  return *a == *b;
}

std::optional<bool> eval_bool(const Expr& e, const Binding& row) {
  switch (e.kind) {
    case ExprKind::Or: {
      auto l = eval_bool(*e.args[0], row);
      auto r = eval_bool(*e.args[1], row);
      // SPARQL three-valued OR: error || true = true
      if (l && *l) return true;
      if (r && *r) return true;
      if (l && r) return false;
      return std::nullopt;
    }
    case ExprKind::And: {
      auto l = eval_bool(*e.args[0], row);
      auto r = eval_bool(*e.args[1], row);
      if (l && !*l) return false;
      if (r && !*r) return false;
      if (l && r) return true;
      return std::nullopt;
    }
    case ExprKind::Not: {
      auto v = eval_bool(*e.args[0], row);
      if (!v) return std::nullopt;
      return !*v;
    }
    case ExprKind::Bound:
      return row.count(e.var) > 0;
    case ExprKind::Compare: {
      if (e.op == "=") return eval_equals(*e.args[0], *e.args[1], row);
      if (e.op == "!=") {
        auto v = eval_equals(*e.args[0], *e.args[1], row);
        if (!v) return std::nullopt;
        return !*v;
      }
      auto a = eval_term(*e.args[0], row);
      auto b = eval_term(*e.args[1], row);
      if (!a || !b) return std::nullopt;
      auto c = compare_terms(*a, *b);
      if (!c) return std::nullopt;
      if (e.op == "<") return *c < 0;
      if (e.op == "<=") return *c <= 0;
      if (e.op == ">") return *c > 0;
      return *c >= 0;  // >=
    }
    case ExprKind::Regex: {
      auto text = eval_term(*e.args[0], row);
      auto pattern = eval_term(*e.args[1], row);
      if (!text || !pattern || !text->is_literal() || !pattern->is_literal())
        return std::nullopt;
      auto flags = std::regex::ECMAScript;
      if (e.args.size() > 2) {
        auto f = eval_term(*e.args[2], row);
        if (!f || !f->is_literal()) return std::nullopt;
        if (f->value.find('i') != std::string::npos)
          flags |= std::regex::icase;
      }
      try {
        return std::regex_search(text->value, std::regex(pattern->value, flags));
      } catch (const std::regex_error&) {
        return std::nullopt;
      }
    }
    case ExprKind::In: {
      auto v = eval_term(*e.args[0], row);
      if (!v) return std::nullopt;
      bool saw_error = false;
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        auto item = eval_term(*e.args[i], row);
        if (!item) {
          saw_error = true;
          continue;
        }
        auto dv = to_double(*v), di = to_double(*item);
        if ((dv && di && *dv == *di) || *v == *item) return true;
      }
      if (saw_error) return std::nullopt;
      return false;
    }
    case ExprKind::Constant:
      return ebv(e.term);
    case ExprKind::Var: {
      auto it = row.find(e.var);
      if (it == row.end()) return std::nullopt;
      return ebv(it->second);
    }
  }
  return std::nullopt;
}

std::optional<Term> eval_term(const Expr& e, const Binding& row) {
  switch (e.kind) {
    case ExprKind::Constant:
      return e.term;
    case ExprKind::Var: {
      auto it = row.find(e.var);
      if (it == row.end()) return std::nullopt;
      return it->second;
    }
    default: {
      auto b = eval_bool(e, row);
      if (!b) return std::nullopt;
      return Term::literal(*b ? "true" : "false", rdf::xsd::boolean);
    }
  }
}

// --- pattern matching / joins ---

bool compatible(const Binding& a, const Binding& b) {
  for (const auto& [var, term] : b) {
    auto it = a.find(var);
    if (it != a.end() && it->second != term) return false;
  }
  return true;
}

Binding merged(const Binding& a, const Binding& b) {
  Binding out = a;
  out.insert(b.begin(), b.end());
  return out;
}

std::vector<Binding> join(const std::vector<Binding>& a,
                          const std::vector<Binding>& b) {
  std::vector<Binding> out;
  for (const auto& ra : a)
    for (const auto& rb : b)
      if (compatible(ra, rb)) out.push_back(merged(ra, rb));
  return out;
}

std::vector<Binding> left_join(const std::vector<Binding>& a,
                               const std::vector<Binding>& b) {
  std::vector<Binding> out;
  for (const auto& ra : a) {
    bool any = false;
    for (const auto& rb : b)
      if (compatible(ra, rb)) {
        out.push_back(merged(ra, rb));
        any = true;
      }
    if (!any) out.push_back(ra);
  }
  return out;
}

// Extends each row with matches of one triple pattern.
std::vector<Binding> extend(const std::vector<Binding>& rows,
                            const TriplePattern& pattern,
                            const TripleStore& store) {
  std::vector<Binding> out;
  for (const auto& row : rows) {
    store::TriplePattern concrete;
    auto fill = [&](const PatternTerm& pt,
                    std::optional<Term>& slot) -> const std::string* {
      if (!pt.is_var) {
        slot = pt.term;
        return nullptr;
      }
      auto it = row.find(pt.var);
      if (it != row.end()) {
        slot = it->second;
        return nullptr;
      }
      return &pt.var;
    };
    const std::string* sv = fill(pattern.subject, concrete.subject);
    const std::string* pv = fill(pattern.predicate, concrete.predicate);
    const std::string* ov = fill(pattern.object, concrete.object);
    for (const auto& t : store.match(concrete)) {
      Binding next = row;
      bool ok = true;
      auto bind = [&](const std::string* var, const Term& term) {
        if (!var) return;
        auto [it, inserted] = next.emplace(*var, term);
        if (!inserted && it->second != term) ok = false;
      };
      bind(sv, t.subject);
      bind(pv, t.predicate);
      bind(ov, t.object);
      if (ok) out.push_back(std::move(next));
    }
  }
  return out;
}

// Greedy join order: most bound positions first. Semantics do not depend on
// the order, only the work does.
std::vector<std::size_t> plan_order(const std::vector<TriplePattern>& patterns) {
  std::vector<std::size_t> order(patterns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::set<std::string> bound;
  std::vector<std::size_t> result;
  std::vector<bool> used(patterns.size(), false);
  auto score = [&](const TriplePattern& p) {
    int s = 0;
    for (const PatternTerm* pt : {&p.subject, &p.predicate, &p.object})
      if (!pt->is_var || bound.count(pt->var)) ++s;
    return s;
  };
  for (std::size_t step = 0; step < patterns.size(); ++step) {
    int best_score = -1;
    std::size_t best = 0;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (used[i]) continue;
      int s = score(patterns[i]);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    used[best] = true;
    result.push_back(best);
    const auto& p = patterns[best];
    for (const PatternTerm* pt : {&p.subject, &p.predicate, &p.object})
      if (pt->is_var) bound.insert(pt->var);
  }
  return result;
}

std::vector<Binding> eval_group_impl(const GroupPattern& group,
                                     const TripleStore& store) {
  std::vector<Binding> rows{Binding{}};
  for (std::size_t i : plan_order(group.triples))
    rows = extend(rows, group.triples[i], store);
  for (const auto& [left, right] : group.unions) {
    std::vector<Binding> alt = eval_group_impl(left, store);
    std::vector<Binding> r = eval_group_impl(right, store);
    alt.insert(alt.end(), r.begin(), r.end());
    rows = join(rows, alt);
  }
  for (const auto& opt : group.optionals)
    rows = left_join(rows, eval_group_impl(opt, store));
  for (const auto& filter : group.filters) {
    std::vector<Binding> kept;
    for (auto& row : rows) {
      auto v = eval_bool(*filter, row);
      if (v && *v) kept.push_back(std::move(row));
    }
    rows = std::move(kept);
  }
  return rows;
}

void collect_vars_ordered(const GroupPattern& g,
                          std::vector<std::string>& out,
                          std::set<std::string>& seen) {
  auto add = [&](const PatternTerm& pt) {
    if (pt.is_var && seen.insert(pt.var).second) out.push_back(pt.var);
  };
  for (const auto& t : g.triples) {
    add(t.subject);
    add(t.predicate);
    add(t.object);
  }
  for (const auto& [l, r] : g.unions) {
    collect_vars_ordered(l, out, seen);
    collect_vars_ordered(r, out, seen);
  }
  for (const auto& o : g.optionals) collect_vars_ordered(o, out, seen);
}

// Total order over optional terms for ORDER BY: unbound < blank < IRI <
// literal; numeric literals compare numerically when both are numeric.
bool term_less(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (!a || !b) return !a && b;
  auto rank = [](const Term& t) {
    switch (t.kind) {
      case rdf::TermKind::Blank: return 0;
      case rdf::TermKind::Iri: return 1;
      case rdf::TermKind::Literal: return 2;
    }
    return 3;
  };
  if (rank(*a) != rank(*b)) return rank(*a) < rank(*b);
  auto da = to_double(*a), db = to_double(*b);
  if (da && db && *da != *db) return *da < *db;
  return *a < *b;
}

std::vector<Binding> aggregate_rows(const Query& q,
                                    const std::vector<Binding>& rows) {
  // group key = values of GROUP BY vars
  std::map<std::vector<std::optional<Term>>, std::vector<const Binding*>>
      groups;
  for (const auto& row : rows) {
    std::vector<std::optional<Term>> key;
    for (const auto& v : q.group_by) {
      auto it = row.find(v);
      key.push_back(it == row.end() ? std::nullopt
                                    : std::optional<Term>(it->second));
    }
    groups[key].push_back(&row);
  }
  if (groups.empty() && q.group_by.empty()) groups[{}] = {};
  std::vector<Binding> out;
  for (const auto& [key, members] : groups) {
    Binding row;
    for (std::size_t i = 0; i < q.group_by.size(); ++i)
      if (key[i]) row[q.group_by[i]] = *key[i];
    for (const auto& agg : q.aggregates) {
      std::size_t count = 0;
      if (agg.var.empty()) {
        if (agg.distinct) {
          std::set<Binding> distinct;
          for (const Binding* m : members) distinct.insert(*m);
          count = distinct.size();
        } else {
          count = members.size();
        }
      } else {
        std::set<Term> distinct;
        for (const Binding* m : members) {
          auto it = m->find(agg.var);
          if (it == m->end()) continue;
          if (agg.distinct)
            distinct.insert(it->second);
          else
            ++count;
        }
        if (agg.distinct) count = distinct.size();
      }
      row[agg.alias] = Term::literal(std::to_string(count), rdf::xsd::integer);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::vector<Binding> evaluate_group(const GroupPattern& group,
                                    const TripleStore& store) {
  return eval_group_impl(group, store);
}

QueryResult evaluate(const Query& q, const TripleStore& store) {
  QueryResult result;
  result.form = q.form;
  std::vector<Binding> rows = eval_group_impl(q.pattern, store);

  if (q.form == QueryForm::Ask) {
    result.boolean = !rows.empty();
    return result;
  }

  if (q.form == QueryForm::Construct) {
    for (const auto& row : rows) {
      for (const auto& tpl : q.construct_template) {
        auto instantiate = [&](const PatternTerm& pt) -> std::optional<Term> {
          if (!pt.is_var) return pt.term;
          auto it = row.find(pt.var);
          if (it == row.end()) return std::nullopt;
          return it->second;
        };
        auto s = instantiate(tpl.subject);
        auto p = instantiate(tpl.predicate);
        auto o = instantiate(tpl.object);
        // template triples with unbound variables are skipped
        if (!s || !p || !o) continue;
        if (s->is_literal() || !p->is_iri()) continue;
        result.graph.insert(*s, *p, *o);
      }
    }
    return result;
  }

  // SELECT
  bool aggregated = !q.aggregates.empty() || !q.group_by.empty();
  if (aggregated) rows = aggregate_rows(q, rows);

  std::vector<std::string> variables;
  if (q.select_all) {
    std::set<std::string> seen;
    collect_vars_ordered(q.pattern, variables, seen);
  } else if (aggregated) {
    variables = q.group_by;
    for (const auto& agg : q.aggregates) variables.push_back(agg.alias);
    if (!q.projection.empty()) {
      // SELECT ?g (COUNT(*) AS ?c) ... explicit projection order
      variables = q.projection;
      for (const auto& agg : q.aggregates) variables.push_back(agg.alias);
    }
  } else {
    variables = q.projection;
  }

  if (!q.order_by.empty()) {
    std::stable_sort(rows.begin(), rows.end(),
                     [&](const Binding& a, const Binding& b) {
                       for (const auto& key : q.order_by) {
                         auto ia = a.find(key.var);
                         auto ib = b.find(key.var);
                         std::optional<Term> ta, tb;
                         if (ia != a.end()) ta = ia->second;
                         if (ib != b.end()) tb = ib->second;
                         if (term_less(ta, tb)) return key.ascending;
                         if (term_less(tb, ta)) return !key.ascending;
                       }
                       return false;
                     });
  }

  // project
  std::vector<Binding> projected;
  projected.reserve(rows.size());
  for (const auto& row : rows) {
    Binding p;
    for (const auto& v : variables) {
      auto it = row.find(v);
      if (it != row.end()) p[v] = it->second;
    }
    projected.push_back(std::move(p));
  }

  if (q.distinct) {
    std::set<Binding> seen;
    std::vector<Binding> dedup;
    for (auto& row : projected)
      if (seen.insert(row).second) dedup.push_back(std::move(row));
    projected = std::move(dedup);
  }

  std::size_t begin = std::min(q.offset.value_or(0), projected.size());
  std::size_t end = projected.size();
  if (q.limit) end = std::min(end, begin + *q.limit);
  result.solutions.variables = variables;
  result.solutions.rows.assign(projected.begin() + begin,
                               projected.begin() + end);
  return result;
}

}  // namespace kgf::query
