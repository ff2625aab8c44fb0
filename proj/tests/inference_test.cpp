#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "kgf/infer/rules.hpp"
#include "kgf/rdf/turtle.hpp"
#include "kgf/store/store.hpp"

using namespace kgf;
using infer::Ruleset;

namespace {

const rdf::Term TYPE = rdf::Term::iri(std::string(rdf::ns::rdf) + "type");
const rdf::Term SUB =
    rdf::Term::iri(std::string(rdf::ns::rdfs) + "subClassOf");
const rdf::Term SUBP =
    rdf::Term::iri(std::string(rdf::ns::rdfs) + "subPropertyOf");
const rdf::Term DOMAIN = rdf::Term::iri(std::string(rdf::ns::rdfs) + "domain");
const rdf::Term RANGE = rdf::Term::iri(std::string(rdf::ns::rdfs) + "range");
const rdf::Term INV = rdf::Term::iri(std::string(rdf::ns::owl) + "inverseOf");
const rdf::Term SYM =
    rdf::Term::iri(std::string(rdf::ns::owl) + "SymmetricProperty");
const rdf::Term TRANS =
    rdf::Term::iri(std::string(rdf::ns::owl) + "TransitiveProperty");
const rdf::Term SAME = rdf::Term::iri(std::string(rdf::ns::owl) + "sameAs");

// Independent oracle: naive nested-loop closure, re-run until nothing new.
rdf::Graph naive_closure(const rdf::Graph& input, Ruleset rs) {
  rdf::Graph g = input;
  if (rs == Ruleset::None) return g;
  const bool owl = rs == Ruleset::Default;
  bool changed = true;
  while (changed) {
    changed = false;
    auto add = [&](const rdf::Term& s, const rdf::Term& p,
                   const rdf::Term& o) {
      if (s.is_literal() || !p.is_iri()) return;
      if (g.insert({s, p, o})) changed = true;
    };
    std::vector<rdf::Triple> ts(g.begin(), g.end());
    for (const auto& t1 : ts) {
      if (t1.predicate == SUB) {
        for (const auto& t2 : ts) {
          if (t2.predicate == SUB && t2.subject == t1.object)
            add(t1.subject, SUB, t2.object);
          if (t2.predicate == TYPE && t2.object == t1.subject)
            add(t2.subject, TYPE, t1.object);
        }
      }
      if (t1.predicate == SUBP) {
        for (const auto& t2 : ts) {
          if (t2.predicate == SUBP && t2.subject == t1.object)
            add(t1.subject, SUBP, t2.object);
          if (t2.predicate == t1.subject)
            add(t2.subject, t1.object, t2.object);
        }
      }
      if (t1.predicate == DOMAIN) {
        for (const auto& t2 : ts)
          if (t2.predicate == t1.subject) add(t2.subject, TYPE, t1.object);
      }
      if (t1.predicate == RANGE) {
        for (const auto& t2 : ts)
          if (t2.predicate == t1.subject) add(t2.object, TYPE, t1.object);
      }
      if (!owl) continue;
      if (t1.predicate == INV) {
        for (const auto& t2 : ts) {
          if (t2.predicate == t1.subject) add(t2.object, t1.object, t2.subject);
          if (t2.predicate == t1.object)
            add(t2.object, t1.subject, t2.subject);
        }
      }
      if (t1.predicate == TYPE && t1.object == SYM) {
        for (const auto& t2 : ts)
          if (t2.predicate == t1.subject) add(t2.object, t2.predicate,
                                              t2.subject);
      }
      if (t1.predicate == TYPE && t1.object == TRANS) {
        for (const auto& t2 : ts)
          for (const auto& t3 : ts)
            if (t2.predicate == t1.subject && t3.predicate == t1.subject &&
                t2.object == t3.subject)
              add(t2.subject, t2.predicate, t3.object);
      }
      if (t1.predicate == SAME) {
        add(t1.object, SAME, t1.subject);
        for (const auto& t2 : ts)
          if (t2.predicate == SAME && t2.subject == t1.object)
            add(t1.subject, SAME, t2.object);
      }
    }
  }
  return g;
}

store::TripleStore store_of(const rdf::Graph& g) {
  store::TripleStore s;
  s.import(g);
  return s;
}

rdf::Term ex(const std::string& local) {
  return rdf::Term::iri("http://example.org/" + local);
}

}  // namespace

TEST_SUITE("materialize") {
  TEST_CASE("empty ruleset adds nothing") {
    auto store = store_of(rdf::parse_turtle(
        "@prefix ex: <http://example.org/> . ex:a ex:p ex:b ."));
    CHECK(infer::materialize(store, Ruleset::None) == 0);
    CHECK(store.size() == 1);
  }

  TEST_CASE("subclass instance propagation adds exactly one triple") {
    rdf::Graph g;
    g.insert({ex("a"), TYPE, ex("A")});
    g.insert({ex("A"), SUB, ex("B")});
    auto store = store_of(g);
    CHECK(infer::materialize(store, Ruleset::Rdfs) == 1);
    CHECK(store.contains({ex("a"), TYPE, ex("B")}));
  }

  TEST_CASE("domain rule types the subject") {
    rdf::Graph g;
    g.insert({ex("s"), ex("p"), ex("o")});
    g.insert({ex("p"), DOMAIN, ex("C")});
    auto store = store_of(g);
    infer::materialize(store, Ruleset::Rdfs);
    CHECK(store.contains({ex("s"), TYPE, ex("C")}));
  }

  TEST_CASE("range rule never types a literal") {
    rdf::Graph g;
    g.insert({ex("s"), ex("p"), rdf::Term::literal("5")});
    g.insert({ex("p"), RANGE, ex("C")});
    auto store = store_of(g);
    infer::materialize(store, Ruleset::Rdfs);
    CHECK_FALSE(store.contains({rdf::Term::literal("5"), TYPE, ex("C")}));
  }

  TEST_CASE("owl rules only fire under the default ruleset") {
    rdf::Graph g;
    g.insert({ex("p"), INV, ex("q")});
    g.insert({ex("a"), ex("p"), ex("b")});
    auto s1 = store_of(g);
    infer::materialize(s1, Ruleset::Rdfs);
    CHECK_FALSE(s1.contains({ex("b"), ex("q"), ex("a")}));
    auto s2 = store_of(g);
    infer::materialize(s2, Ruleset::Default);
    CHECK(s2.contains({ex("b"), ex("q"), ex("a")}));
  }

  TEST_CASE("materialize is idempotent") {
    rdf::Graph g;
    g.insert({ex("a"), TYPE, ex("A")});
    g.insert({ex("A"), SUB, ex("B")});
    g.insert({ex("B"), SUB, ex("C")});
    g.insert({ex("x"), SAME, ex("y")});
    auto store = store_of(g);
    CHECK(infer::materialize(store, Ruleset::Default) > 0);
    CHECK(infer::materialize(store, Ruleset::Default) == 0);
  }

  TEST_CASE("fixpoint equals the naive closure oracle on random graphs") {
    std::mt19937 rng(20240819);
    auto pick = [&](int n) {
      return std::uniform_int_distribution<int>(0, n - 1)(rng);
    };
    for (int round = 0; round < 25; ++round) {
      rdf::Graph g;
      int triples = 5 + pick(55);
      for (int i = 0; i < triples; ++i) {
        auto cls = [&] { return ex("C" + std::to_string(pick(5))); };
        auto prop = [&] { return ex("p" + std::to_string(pick(4))); };
        auto ind = [&] { return ex("i" + std::to_string(pick(8))); };
        switch (pick(10)) {
          case 0: g.insert({ind(), TYPE, cls()}); break;
          case 1: g.insert({cls(), SUB, cls()}); break;
          case 2: g.insert({prop(), DOMAIN, cls()}); break;
          case 3: g.insert({prop(), RANGE, cls()}); break;
          case 4: g.insert({prop(), SUBP, prop()}); break;
          case 5: g.insert({ind(), prop(), ind()}); break;
          case 6:
            g.insert({ind(), prop(),
                      rdf::Term::literal("v" + std::to_string(pick(3)))});
            break;
          case 7: g.insert({prop(), INV, prop()}); break;
          case 8: g.insert({prop(), TYPE, pick(2) ? SYM : TRANS}); break;
          case 9: g.insert({ind(), SAME, ind()}); break;
        }
      }
      for (auto rs : {Ruleset::Rdfs, Ruleset::Default}) {
        auto store = store_of(g);
        infer::materialize(store, rs);
        auto expected = naive_closure(g, rs);
        CHECK(store.to_graph() == expected);
      }
    }
  }

  TEST_CASE("monotonicity: more input never loses entailments") {
    std::mt19937 rng(7);
    rdf::Graph small;
    small.insert({ex("a"), TYPE, ex("A")});
    small.insert({ex("A"), SUB, ex("B")});
    rdf::Graph big = small;
    big.insert({ex("B"), SUB, ex("C")});
    big.insert({ex("p"), DOMAIN, ex("D")});
    big.insert({ex("a"), ex("p"), ex("b")});
    auto s1 = store_of(small);
    auto s2 = store_of(big);
    infer::materialize(s1, Ruleset::Default);
    infer::materialize(s2, Ruleset::Default);
    for (const auto& t : s1.to_graph()) CHECK(s2.contains(t));
  }
}

TEST_SUITE("consistency") {
  TEST_CASE("empty graph is consistent") {
    store::TripleStore store;
    auto report = infer::check_consistency(store, Ruleset::Default);
    CHECK(report.consistent);
    CHECK(report.violations.empty());
  }

  TEST_CASE("disjoint classes clash names the instance") {
    auto store = store_of(rdf::parse_turtle(R"(
      @prefix ex: <http://example.org/> .
      @prefix owl: <http://www.w3.org/2002/07/owl#> .
      ex:A owl:disjointWith ex:B .
      ex:x a ex:A , ex:B .
    )"));
    auto report = infer::check_consistency(store, Ruleset::Default);
    CHECK_FALSE(report.consistent);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].rule_name == "disjoint-classes");
    CHECK(report.violations[0].bindings.at("x") == ex("x"));
    CHECK(report.violations[0].message.find("http://example.org/x") !=
          std::string::npos);
  }

  TEST_CASE("clash via a subclass edge is found after materialization") {
    auto store = store_of(rdf::parse_turtle(R"(
      @prefix ex: <http://example.org/> .
      @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
      @prefix owl: <http://www.w3.org/2002/07/owl#> .
      ex:A owl:disjointWith ex:B .
      ex:Sub rdfs:subClassOf ex:B .
      ex:x a ex:A , ex:Sub .
    )"));
    auto report = infer::check_consistency(store, Ruleset::Default);
    CHECK_FALSE(report.consistent);
    CHECK(report.entailed_triples_added > 0);
  }

  TEST_CASE("sameAs plus differentFrom is inconsistent") {
    auto store = store_of(rdf::parse_turtle(R"(
      @prefix ex: <http://example.org/> .
      @prefix owl: <http://www.w3.org/2002/07/owl#> .
      ex:x owl:sameAs ex:y .
      ex:x owl:differentFrom ex:y .
    )"));
    auto report = infer::check_consistency(store, Ruleset::Default);
    CHECK_FALSE(report.consistent);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].rule_name == "same-and-different");
  }

  TEST_CASE("unparseable literal under a declared XSD range is flagged") {
    auto store = store_of(rdf::parse_turtle(R"(
      @prefix ex: <http://example.org/> .
      @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
      @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
      ex:age rdfs:range xsd:integer .
      ex:x ex:age "not-a-number" .
      ex:y ex:age "41" .
    )"));
    auto report = infer::check_consistency(store, Ruleset::Rdfs);
    CHECK_FALSE(report.consistent);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].rule_name == "datatype-range");
    CHECK(report.violations[0].bindings.at("s") == ex("x"));
  }

  TEST_CASE("violations are deterministic and deduplicated") {
    auto store = store_of(rdf::parse_turtle(R"(
      @prefix ex: <http://example.org/> .
      @prefix owl: <http://www.w3.org/2002/07/owl#> .
      ex:A owl:disjointWith ex:B .
      ex:B owl:disjointWith ex:A .
      ex:x a ex:A , ex:B .
      ex:z a ex:A , ex:B .
    )"));
    auto report = infer::check_consistency(store, Ruleset::Default);
    // one canonical violation per instance, not one per edge direction
    REQUIRE(report.violations.size() == 2);
    CHECK(report.violations[0].bindings.at("x") == ex("x"));
    CHECK(report.violations[1].bindings.at("x") == ex("z"));
    auto store2 = store_of(store.to_graph());
    auto report2 = infer::check_consistency(store2, Ruleset::Default);
    CHECK(report.violations == report2.violations);
  }
}
