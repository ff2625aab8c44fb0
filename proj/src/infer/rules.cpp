#include "kgf/infer/rules.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <stdexcept>

#include "kgf/prep/table.hpp"
#include "kgf/rdf/serialize.hpp"

namespace kgf::infer {

namespace {

using Bindings = std::map<std::string, rdf::Term>;

rdf::Term iri(const std::string& ns, const char* local) {
  return rdf::Term::iri(ns + local);
}

const rdf::Term kType = iri(rdf::ns::rdf, "type");
const rdf::Term kSubClassOf = iri(rdf::ns::rdfs, "subClassOf");
const rdf::Term kSubPropertyOf = iri(rdf::ns::rdfs, "subPropertyOf");
const rdf::Term kDomain = iri(rdf::ns::rdfs, "domain");
const rdf::Term kRange = iri(rdf::ns::rdfs, "range");
const rdf::Term kInverseOf = iri(rdf::ns::owl, "inverseOf");
const rdf::Term kSymmetric = iri(rdf::ns::owl, "SymmetricProperty");
const rdf::Term kTransitive = iri(rdf::ns::owl, "TransitiveProperty");
const rdf::Term kSameAs = iri(rdf::ns::owl, "sameAs");
const rdf::Term kDisjointWith = iri(rdf::ns::owl, "disjointWith");
const rdf::Term kDifferentFrom = iri(rdf::ns::owl, "differentFrom");

Slot V(const char* n) { return Slot::v(n); }
Slot C(const rdf::Term& t) { return Slot::c(t); }

bool unify_slot(const Slot& slot, const rdf::Term& term, Bindings& env) {
  if (!slot.is_var) return slot.term == term;
  auto it = env.find(slot.var);
  if (it == env.end()) {
    env[slot.var] = term;
    return true;
  }
  return it->second == term;
}

bool unify(const Atom& atom, const rdf::Triple& t, Bindings& env) {
  return unify_slot(atom.subject, t.subject, env) &&
         unify_slot(atom.predicate, t.predicate, env) &&
         unify_slot(atom.object, t.object, env);
}

store::TriplePattern to_pattern(const Atom& atom, const Bindings& env) {
  auto bind = [&](const Slot& s) -> std::optional<rdf::Term> {
    if (!s.is_var) return s.term;
    auto it = env.find(s.var);
    if (it != env.end()) return it->second;
    return std::nullopt;
  };
  return {bind(atom.subject), bind(atom.predicate), bind(atom.object)};
}

/// Joins the body atoms left to right. When delta_index is set, that atom is
/// matched against `delta` instead of the store (semi-naive restriction).
void eval_body(const store::TripleStore& store, const rdf::Graph* delta,
               const std::vector<Atom>& body, std::size_t index,
               std::optional<std::size_t> delta_index, Bindings env,
               const std::function<void(const Bindings&)>& emit) {
  if (index == body.size()) {
    emit(env);
    return;
  }
  const Atom& atom = body[index];
  if (delta_index && *delta_index == index) {
    for (const auto& t : *delta) {
      Bindings next = env;
      if (unify(atom, t, next))
        eval_body(store, delta, body, index + 1, delta_index, std::move(next),
                  emit);
    }
  } else {
    for (const auto& t : store.match(to_pattern(atom, env))) {
      Bindings next = env;
      if (unify(atom, t, next))
        eval_body(store, delta, body, index + 1, delta_index, std::move(next),
                  emit);
    }
  }
}

std::optional<rdf::Triple> instantiate_head(const Atom& head,
                                            const Bindings& env) {
  auto resolve = [&](const Slot& s) { return s.is_var ? env.at(s.var) : s.term; };
  rdf::Triple t{resolve(head.subject), resolve(head.predicate),
                resolve(head.object)};
  if (t.subject.is_literal() || !t.predicate.is_iri()) return std::nullopt;
  return t;
}

std::string fill_message(const std::string& tpl, const Bindings& env) {
  std::string out;
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] == '{') {
      auto end = tpl.find('}', i);
      std::string var = tpl.substr(i + 1, end - i - 1);
      out += rdf::term_to_string(env.at(var));
      i = end + 1;
    } else {
      out += tpl[i++];
    }
  }
  return out;
}

/// Swap the bindings of two symmetric variables into sorted order so the
/// mirrored derivation collapses to one violation.
void canonicalize_pair(Bindings& env, const char* a, const char* b) {
  auto ia = env.find(a), ib = env.find(b);
  if (ia != env.end() && ib != env.end() && ib->second < ia->second)
    std::swap(ia->second, ib->second);
}

bool parses_as_xsd(const std::string& lexical, const std::string& datatype) {
  using prep::ColumnType;
  if (datatype == rdf::xsd::integer)
    return prep::cell_parses_as(lexical, ColumnType::Integer);
  if (datatype == rdf::xsd::decimal)
    return prep::cell_parses_as(lexical, ColumnType::Decimal);
  if (datatype == rdf::xsd::boolean)
    return prep::cell_parses_as(lexical, ColumnType::Boolean);
  if (datatype == rdf::xsd::date)
    return prep::cell_parses_as(lexical, ColumnType::Date);
  if (datatype == rdf::xsd::dateTime)
    return prep::cell_parses_as(lexical, ColumnType::DateTime);
  if (datatype == rdf::xsd::double_) {
    if (lexical.empty()) return false;
    char* end = nullptr;
    std::strtod(lexical.c_str(), &end);
    return end == lexical.c_str() + lexical.size();
  }
  return true;  // not a datatype we check
}

bool checked_xsd_datatype(const std::string& datatype) {
  return datatype == rdf::xsd::integer || datatype == rdf::xsd::decimal ||
         datatype == rdf::xsd::boolean || datatype == rdf::xsd::date ||
         datatype == rdf::xsd::dateTime || datatype == rdf::xsd::double_;
}

}  // namespace

std::optional<Ruleset> ruleset_from_name(const std::string& name) {
  if (name == "none") return Ruleset::None;
  if (name == "rdfs") return Ruleset::Rdfs;
  if (name == "default") return Ruleset::Default;
  return std::nullopt;
}

std::string ruleset_name(Ruleset rs) {
  switch (rs) {
    case Ruleset::None: return "none";
    case Ruleset::Rdfs: return "rdfs";
    case Ruleset::Default: return "default";
  }
  return "none";
}

std::vector<Rule> entailment_rules(Ruleset rs) {
  if (rs == Ruleset::None) return {};
  std::vector<Rule> rules{
      {"subclass-transitivity",
       {{V("a"), C(kSubClassOf), V("b")}, {V("b"), C(kSubClassOf), V("c")}},
       Atom{V("a"), C(kSubClassOf), V("c")},
       {}},
      {"subclass-instance",
       {{V("x"), C(kType), V("a")}, {V("a"), C(kSubClassOf), V("b")}},
       Atom{V("x"), C(kType), V("b")},
       {}},
      {"subproperty-transitivity",
       {{V("p"), C(kSubPropertyOf), V("q")},
        {V("q"), C(kSubPropertyOf), V("r")}},
       Atom{V("p"), C(kSubPropertyOf), V("r")},
       {}},
      {"subproperty-propagation",
       {{V("p"), C(kSubPropertyOf), V("q")}, {V("s"), V("p"), V("o")}},
       Atom{V("s"), V("q"), V("o")},
       {}},
      {"domain",
       {{V("p"), C(kDomain), V("c")}, {V("s"), V("p"), V("o")}},
       Atom{V("s"), C(kType), V("c")},
       {}},
      {"range",
       {{V("p"), C(kRange), V("c")}, {V("s"), V("p"), V("o")}},
       Atom{V("o"), C(kType), V("c")},
       {}},
  };
  if (rs == Ruleset::Default) {
    rules.push_back({"inverse-1",
                     {{V("p"), C(kInverseOf), V("q")}, {V("s"), V("p"), V("o")}},
                     Atom{V("o"), V("q"), V("s")},
                     {}});
    rules.push_back({"inverse-2",
                     {{V("p"), C(kInverseOf), V("q")}, {V("s"), V("q"), V("o")}},
                     Atom{V("o"), V("p"), V("s")},
                     {}});
    rules.push_back({"symmetric",
                     {{V("p"), C(kType), C(kSymmetric)}, {V("s"), V("p"), V("o")}},
                     Atom{V("o"), V("p"), V("s")},
                     {}});
    rules.push_back({"transitive",
                     {{V("p"), C(kType), C(kTransitive)},
                      {V("s"), V("p"), V("o")},
                      {V("o"), V("p"), V("z")}},
                     Atom{V("s"), V("p"), V("z")},
                     {}});
    rules.push_back({"sameas-symmetry",
                     {{V("x"), C(kSameAs), V("y")}},
                     Atom{V("y"), C(kSameAs), V("x")},
                     {}});
    rules.push_back({"sameas-transitivity",
                     {{V("x"), C(kSameAs), V("y")}, {V("y"), C(kSameAs), V("z")}},
                     Atom{V("x"), C(kSameAs), V("z")},
                     {}});
  }
  return rules;
}

std::vector<Rule> inconsistency_rules(Ruleset rs) {
  if (rs != Ruleset::Default) return {};
  return {
      {"disjoint-classes",
       {{V("a"), C(kDisjointWith), V("b")},
        {V("x"), C(kType), V("a")},
        {V("x"), C(kType), V("b")}},
       std::nullopt,
       "{x} is an instance of disjoint classes {a} and {b}"},
      {"same-and-different",
       {{V("x"), C(kSameAs), V("y")}, {V("x"), C(kDifferentFrom), V("y")}},
       std::nullopt,
       "{x} is declared both sameAs and differentFrom {y}"},
  };
}

std::size_t materialize(store::TripleStore& store, Ruleset rs) {
  const auto rules = entailment_rules(rs);
  if (rules.empty()) return 0;

  constexpr std::size_t kIterationCap = 100000;
  std::size_t added_total = 0;
  rdf::Graph delta = store.to_graph();
  std::size_t rounds = 0;
  while (!delta.empty()) {
    if (++rounds > kIterationCap)
      throw std::runtime_error("materialize: iteration cap exceeded");
    rdf::Graph next;
    for (const auto& rule : rules) {
      for (std::size_t i = 0; i < rule.body.size(); ++i) {
        eval_body(store, &delta, rule.body, 0, i, {},
                  [&](const Bindings& env) {
                    auto t = instantiate_head(*rule.head, env);
                    if (t && !store.contains(*t)) next.insert(*t);
                  });
      }
    }
    for (const auto& t : next)
      if (store.insert(t)) ++added_total;
    delta = std::move(next);
  }
  return added_total;
}

ConsistencyReport check_consistency(store::TripleStore& store, Ruleset rs) {
  ConsistencyReport report;
  report.entailed_triples_added = materialize(store, rs);

  std::set<Violation> found;
  for (const auto& rule : inconsistency_rules(rs)) {
    eval_body(store, nullptr, rule.body, 0, std::nullopt, {},
              [&](Bindings env) {
                canonicalize_pair(env, "a", "b");
                canonicalize_pair(env, "x", "y");
                found.insert(
                    {rule.name, env, fill_message(rule.message, env)});
              });
  }

  // Datatype check: literals under a property with a declared XSD range must
  // parse under that datatype (rulesets rdfs and default).
  if (rs != Ruleset::None) {
    for (const auto& range_t :
         store.match({std::nullopt, kRange, std::nullopt})) {
      if (!range_t.object.is_iri() ||
          !checked_xsd_datatype(range_t.object.value))
        continue;
      for (const auto& t :
           store.match({std::nullopt, range_t.subject, std::nullopt})) {
        if (!t.object.is_literal()) continue;
        if (parses_as_xsd(t.object.value, range_t.object.value)) continue;
        Bindings env{{"s", t.subject}, {"p", t.predicate}, {"o", t.object},
                     {"dt", range_t.object}};
        found.insert({"datatype-range", env,
                      fill_message("{o} does not parse under datatype {dt} "
                                   "declared as the range of {p}",
                                   env)});
      }
    }
  }

  report.violations.assign(found.begin(), found.end());
  report.consistent = report.violations.empty();
  return report;
}

}  // namespace kgf::infer
