#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgf/rdf/term.hpp"
#include "kgf/store/store.hpp"

namespace kgf::infer {

/// One position of a rule atom: a variable or a constant term.
struct Slot {
  bool is_var = false;
  std::string var;
  rdf::Term term;

  static Slot v(std::string name) { return {true, std::move(name), {}}; }
  static Slot c(rdf::Term t) { return {false, {}, std::move(t)}; }
};

struct Atom {
  Slot subject, predicate, object;
};

/// A forward rule. A missing head marks an inconsistency rule (⊥); its
/// message template may reference body variables as {name}.
struct Rule {
  std::string name;
  std::vector<Atom> body;
  std::optional<Atom> head;
  std::string message;
};

enum class Ruleset { None, Rdfs, Default };

std::optional<Ruleset> ruleset_from_name(const std::string& name);
std::string ruleset_name(Ruleset rs);

/// Entailment rules of a ruleset. Rdfs: subClassOf transitivity and instance
/// propagation, subPropertyOf transitivity and propagation, domain, range.
/// Default adds owl:inverseOf, symmetric and transitive properties, and
/// owl:sameAs symmetry/transitivity.
std::vector<Rule> entailment_rules(Ruleset rs);

/// ⊥ rules evaluated by check_consistency: owl:disjointWith instance clash
/// and owl:sameAs/owl:differentFrom clash (Default only).
std::vector<Rule> inconsistency_rules(Ruleset rs);

struct Violation {
  std::string rule_name;
  std::map<std::string, rdf::Term> bindings;
  std::string message;

  auto operator<=>(const Violation&) const = default;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<Violation> violations;
  std::size_t entailed_triples_added = 0;
};

/// Extends the store's default graph in place with all triples entailed by
/// the ruleset, to fixpoint (semi-naive, delta-driven). Returns the number of
/// triples added. Throws if the internal iteration cap is hit.
std::size_t materialize(store::TripleStore& store, Ruleset rs);

/// Materializes, then evaluates the ⊥ rules plus a datatype check: a literal
/// whose predicate has a declared XSD rdfs:range must parse under that
/// datatype. Violations are deduplicated and deterministically ordered.
ConsistencyReport check_consistency(store::TripleStore& store, Ruleset rs);

}  // namespace kgf::infer
