// End-to-end acceptance suite. Each criterion prints exactly one line:
//   criterion N: PASS|FAIL  <short description>
// The process exits nonzero when any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "kgf/infer/rules.hpp"
#include "kgf/pipeline/endpoint.hpp"
#include "kgf/pipeline/manifest.hpp"
#include "kgf/pipeline/pipeline.hpp"
#include "kgf/prep/join.hpp"
#include "kgf/prep/profile.hpp"
#include "kgf/query/parser.hpp"
#include "kgf/query/results.hpp"
#include "kgf/rdf/nquads.hpp"
#include "kgf/rdf/serialize.hpp"
#include "kgf/rdf/syntax.hpp"
#include "kgf/rdf/turtle.hpp"
#include "kgf/shacl/shapes.hpp"
#include "kgf/store/store.hpp"

#include "support/graph_isomorphism.hpp"
#include "support/random_query.hpp"
#include "support/random_rdf.hpp"
#include "support/reference_eval.hpp"

using namespace kgf;
namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int n, bool ok, const std::string& what) {
  std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  "
            << what << std::endl;
  if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

rdf::Term ex(const std::string& local) {
  return rdf::Term::iri("http://example.org/" + local);
}

std::string fresh_demo(const std::string& tag) {
  fs::path src = fs::path(KGF_FIXTURE_DIR) / "demo";
  fs::path dst = fs::temp_directory_path() / ("kgf_acceptance_" + tag);
  fs::remove_all(dst);
  fs::copy(src, dst, fs::copy_options::recursive);
  return dst.string();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(KGF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// ---------------------------------------------------------------- 1 ------

void criterion1() {
  auto start = Clock::now();
  std::mt19937 rng(1001);
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    rdf::Graph g = testsupport::random_graph(rng, 200);
    for (auto format :
         {rdf::Format::Turtle, rdf::Format::NTriples, rdf::Format::NQuads}) {
      std::string text = rdf::serialize(g, format);
      rdf::Graph back;
      switch (format) {
        case rdf::Format::Turtle: back = rdf::parse_turtle(text); break;
        case rdf::Format::NTriples: back = rdf::parse_ntriples(text); break;
        case rdf::Format::NQuads:
          back = rdf::parse_nquads(text).default_graph();
          break;
      }
      if (!testsupport::isomorphic(g, back)) ok = false;
    }
  }
  double elapsed = seconds_since(start);
  report(1, ok && elapsed < 10.0,
         "round-trip of 1000 random graphs in all three formats (" +
             std::to_string(elapsed) + " s)");
}

// ---------------------------------------------------------------- 2 ------

void criterion2() {
  auto start = Clock::now();
  std::mt19937 rng(1002);
  testsupport::QueryGenerator gen(rng);
  std::uniform_int_distribution<int> size(0, 1000);
  bool ok = true;
  int nonempty = 0;
  for (int i = 0; i < 500 && ok; ++i) {
    rdf::Graph g = testsupport::random_graph(rng, size(rng), 10);
    store::TripleStore s;
    s.import(g);
    std::string text = gen.generate(i % 5 == 4);
    query::Query q = query::parse_query(text);
    auto result = query::evaluate(q, s);
    if (q.form == query::QueryForm::Ask) {
      if (result.boolean != !testsupport::reference_group(q.pattern, g).empty())
        ok = false;
    } else {
      auto expected =
          testsupport::reference_select(q, g, result.solutions.variables);
      std::multiset<query::Binding> actual(result.solutions.rows.begin(),
                                           result.solutions.rows.end());
      if (actual != expected) ok = false;
      if (!actual.empty()) ++nonempty;
    }
  }
  double elapsed = seconds_since(start);
  report(2, ok && nonempty >= 20 && elapsed < 60.0,
         "500 random queries match the nested-loop reference evaluator (" +
             std::to_string(elapsed) + " s)");
}

// ---------------------------------------------------------------- 3 ------

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
rdf::Graph naive_closure(const rdf::Graph& input) {
  rdf::Graph g = input;
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
      if (t1.predicate == INV) {
        for (const auto& t2 : ts) {
          if (t2.predicate == t1.subject) add(t2.object, t1.object, t2.subject);
          if (t2.predicate == t1.object) add(t2.object, t1.subject, t2.subject);
        }
      }
      if (t1.predicate == TYPE && t1.object == SYM) {
        for (const auto& t2 : ts)
          if (t2.predicate == t1.subject)
            add(t2.object, t2.predicate, t2.subject);
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

void criterion3() {
  std::mt19937 rng(1003);
  auto pick = [&](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };
  bool ok = true;
  for (int round = 0; round < 200 && ok; ++round) {
    rdf::Graph g;
    int triples = 5 + pick(495);
    for (int i = 0; i < triples; ++i) {
      auto cls = [&] { return ex("C" + std::to_string(pick(6))); };
      auto prop = [&] { return ex("p" + std::to_string(pick(5))); };
      auto ind = [&] { return ex("i" + std::to_string(pick(12))); };
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
    store::TripleStore s;
    s.import(g);
    infer::materialize(s, infer::Ruleset::Default);
    if (!(s.to_graph() == naive_closure(g))) ok = false;
    if (infer::materialize(s, infer::Ruleset::Default) != 0) ok = false;
  }
  report(3, ok,
         "default-ruleset fixpoint equals naive closure on 200 graphs, "
         "idempotent");
}

// ---------------------------------------------------------------- 4 ------

using ShapeKey = std::tuple<std::string, rdf::Term, std::string,
                            std::optional<rdf::Term>>;

// Brute-force oracle over the raw graph, independent of the store indexes.
std::set<ShapeKey> shape_oracle(const rdf::Graph& g,
                                const std::vector<shacl::Shape>& shapes) {
  const std::string type_iri = std::string(rdf::ns::rdf) + "type";
  std::set<ShapeKey> out;
  for (const auto& shape : shapes) {
    std::set<rdf::Term> focus(shape.target_nodes.begin(),
                              shape.target_nodes.end());
    for (const auto& t : g) {
      if (shape.target_class && t.predicate.value == type_iri &&
          t.object == rdf::Term::iri(*shape.target_class))
        focus.insert(t.subject);
      if (shape.target_subjects_of &&
          t.predicate == rdf::Term::iri(*shape.target_subjects_of))
        focus.insert(t.subject);
    }
    for (const auto& f : focus) {
      for (const auto& c : shape.constraints) {
        std::vector<rdf::Term> values;
        for (const auto& t : g) {
          if (!c.inverse && t.subject == f &&
              t.predicate == rdf::Term::iri(c.path))
            values.push_back(t.object);
          if (c.inverse && t.object == f &&
              t.predicate == rdf::Term::iri(c.path))
            values.push_back(t.subject);
        }
        if (c.min_count && values.size() < *c.min_count)
          out.insert({shape.id, f, "minCount", std::nullopt});
        if (c.max_count && values.size() > *c.max_count)
          out.insert({shape.id, f, "maxCount", std::nullopt});
        for (const auto& v : values) {
          if (c.datatype && (!v.is_literal() || v.datatype != *c.datatype))
            out.insert({shape.id, f, "datatype", v});
          if (c.node_kind) {
            bool kind_ok =
                (*c.node_kind == shacl::NodeKind::Iri && v.is_iri()) ||
                (*c.node_kind == shacl::NodeKind::Literal && v.is_literal()) ||
                (*c.node_kind == shacl::NodeKind::Blank && v.is_blank());
            if (!kind_ok) out.insert({shape.id, f, "nodeKind", v});
          }
          if (c.class_iri) {
            bool typed = false;
            for (const auto& t : g)
              if (t.subject == v && t.predicate.value == type_iri &&
                  t.object == rdf::Term::iri(*c.class_iri))
                typed = true;
            if (v.is_literal() || !typed)
              out.insert({shape.id, f, "class", v});
          }
          if (c.min_inclusive || c.max_inclusive) {
            bool numeric = v.is_literal() && !v.value.empty();
            double n = 0;
            if (numeric) {
              try {
                std::size_t used = 0;
                n = std::stod(v.value, &used);
                numeric = used == v.value.size();
              } catch (...) {
                numeric = false;
              }
            }
            if (c.min_inclusive && (!numeric || n < *c.min_inclusive))
              out.insert({shape.id, f, "minInclusive", v});
            if (c.max_inclusive && (!numeric || n > *c.max_inclusive))
              out.insert({shape.id, f, "maxInclusive", v});
          }
        }
      }
    }
  }
  return out;
}

void criterion4() {
  std::mt19937 rng(1004);
  auto pick = [&](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };
  bool ok = true;
  for (int round = 0; round < 200 && ok; ++round) {
    rdf::Graph g;
    int triples = 5 + pick(80);
    for (int i = 0; i < triples; ++i) {
      auto node = ex("i" + std::to_string(pick(7)));
      switch (pick(4)) {
        case 0: g.insert({node, TYPE, ex("C" + std::to_string(pick(3)))}); break;
        case 1:
          g.insert({node, ex("p" + std::to_string(pick(3))),
                    ex("i" + std::to_string(pick(7)))});
          break;
        case 2:
          g.insert({node, ex("p" + std::to_string(pick(3))),
                    rdf::Term::literal(std::to_string(pick(20)),
                                       rdf::xsd::integer)});
          break;
        case 3:
          g.insert({node, ex("p" + std::to_string(pick(3))),
                    rdf::Term::literal("s" + std::to_string(pick(3)))});
          break;
      }
    }
    std::vector<shacl::Shape> shapes;
    int n_shapes = 1 + pick(3);
    for (int s = 0; s < n_shapes; ++s) {
      shacl::Shape shape;
      shape.id = "shape" + std::to_string(s);
      if (pick(2))
        shape.target_class = "http://example.org/C" + std::to_string(pick(3));
      else
        shape.target_subjects_of =
            "http://example.org/p" + std::to_string(pick(3));
      int n_cons = 1 + pick(3);
      for (int c = 0; c < n_cons; ++c) {
        shacl::PropertyConstraint pc;
        pc.path = "http://example.org/p" + std::to_string(pick(3));
        pc.inverse = pick(4) == 0;
        switch (pick(5)) {
          case 0: pc.min_count = pick(3); break;
          case 1: pc.max_count = pick(3); break;
          case 2: pc.datatype = rdf::xsd::integer; break;
          case 3:
            pc.node_kind =
                pick(2) ? shacl::NodeKind::Iri : shacl::NodeKind::Literal;
            break;
          case 4:
            pc.min_inclusive = pick(10);
            if (pick(2)) pc.max_inclusive = *pc.min_inclusive + pick(10);
            break;
        }
        shape.constraints.push_back(pc);
      }
      shapes.push_back(shape);
    }
    store::TripleStore s;
    s.import(g);
    auto rep = shacl::validate(s, shapes);
    std::set<ShapeKey> got;
    for (const auto& v : rep.violations)
      got.insert({v.shape, v.focus_node, v.constraint, v.value});
    if (got != shape_oracle(g, shapes)) ok = false;
  }
  report(4, ok, "validator equals brute-force shape oracle on 200 cases");
}

// ---------------------------------------------------------------- 5 ------

void criterion5() {
  std::mt19937 rng(1005);
  auto pick = [&](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };
  bool ok = true;

  // completeness: exact non-null fraction on 100 random tables
  for (int round = 0; round < 100 && ok; ++round) {
    prep::Table t;
    t.name = "t";
    int cols = 1 + pick(6), rows = pick(40);
    for (int c = 0; c < cols; ++c) t.columns.push_back({"c" + std::to_string(c), {}});
    std::size_t non_null = 0;
    for (int r = 0; r < rows; ++r) {
      std::vector<prep::Cell> row;
      for (int c = 0; c < cols; ++c) {
        if (pick(3) == 0) {
          row.push_back(std::nullopt);
        } else {
          row.push_back(std::string("v") + std::to_string(pick(9)));
          ++non_null;
        }
      }
      t.rows.push_back(std::move(row));
    }
    auto score = prep::profile(t).entry("completeness").score;
    if (!score) { ok = false; break; }
    double expected = t.rows.empty()
                          ? 1.0
                          : static_cast<double>(non_null) /
                                (static_cast<double>(cols) * t.rows.size());
    if (std::abs(*score - expected) > 1e-12) ok = false;
  }

  // denormalize vs nested-loop oracle on 100 random table pairs
  for (int round = 0; round < 100 && ok; ++round) {
    std::map<std::string, prep::Table> tables;
    prep::Table left, right;
    left.name = "L";
    right.name = "R";
    left.columns = {{"id", {}}, {"k", {}}};
    right.columns = {{"k", {}}, {"v", {}}};
    int ln = pick(30), rn = pick(30);
    for (int i = 0; i < ln; ++i)
      left.rows.push_back({prep::Cell{"l" + std::to_string(i)},
                           pick(5) == 0
                               ? prep::Cell{}
                               : prep::Cell{"k" + std::to_string(pick(6))}});
    for (int i = 0; i < rn; ++i)
      right.rows.push_back({prep::Cell{"k" + std::to_string(pick(6))},
                            prep::Cell{"v" + std::to_string(i)}});
    tables["L"] = left;
    tables["R"] = right;
    for (auto kind : {prep::JoinSpec::Inner, prep::JoinSpec::Left}) {
      prep::JoinSpec spec{"L", "R", "k", "k", kind, false};
      prep::Table joined = prep::denormalize(tables, spec);
      // nested-loop oracle building the exact expected row multiset
      std::multiset<std::vector<prep::Cell>> expected;
      for (const auto& lrow : left.rows) {
        std::size_t matches = 0;
        for (const auto& rrow : right.rows)
          if (lrow[1] && rrow[0] && *lrow[1] == *rrow[0]) {
            expected.insert({lrow[0], lrow[1], rrow[0], rrow[1]});
            ++matches;
          }
        if (matches == 0 && kind == prep::JoinSpec::Left)
          expected.insert({lrow[0], lrow[1], prep::Cell{}, prep::Cell{}});
      }
      std::multiset<std::vector<prep::Cell>> actual(joined.rows.begin(),
                                                    joined.rows.end());
      if (actual != expected) ok = false;
    }
  }
  report(5, ok,
         "completeness exact to 1e-12 and join equals nested-loop oracle");
}

// ---------------------------------------------------------------- 6 ------

void criterion6() {
  auto start = Clock::now();
  std::string dir = fresh_demo("cq_loop");
  int rc = run_cli("run --manifest " + dir + "/manifest.json");
  double elapsed = seconds_since(start);
  std::string got = read_file(dir + "/out/iteration-1/evaluation.csv");
  std::string golden = read_file(dir + "/expected/evaluation.csv");
  // The CSV carries no timestamp; the JSON rendering isolates it.
  json eval = json::parse(read_file(dir + "/out/iteration-1/evaluation.json"));
  bool rate_exact = eval["fulfillment_rate"].get<double>() == 0.875;
  report(6, rc == 0 && !got.empty() && got == golden && rate_exact &&
             elapsed < 30.0,
         "demo run reproduces the hand-computed evaluation table, rate 0.875 (" +
             std::to_string(elapsed) + " s)");
}

// ---------------------------------------------------------------- 7 ------

struct LevelOutcome {
  bool level1_ok = true, level2_ok = true, level3_ok = true;
  quality::QualityReport quality;
};

LevelOutcome run_levels(const std::string& dir) {
  auto m = pipeline::load_manifest(dir + "/manifest.json");
  auto r = pipeline::run_iteration(m);
  LevelOutcome out;
  out.quality = r.quality;
  for (const auto& [path, syntax] : r.quality.level1)
    if (!syntax.ok) out.level1_ok = false;
  out.level2_ok = r.quality.level2.consistent;
  out.level3_ok = r.quality.level3_shapes.conforms &&
                  r.quality.level3_queries.conforms;
  return out;
}

void criterion7() {
  bool ok = true;

  {  // mutation 1: corrupt one Turtle line in the shapes file
    std::string dir = fresh_demo("mut1");
    std::string shapes = read_file(dir + "/shapes.ttl");
    std::size_t lines = std::count(shapes.begin(), shapes.end(), '\n');
    write_file(dir + "/shapes.ttl", shapes + "ex:Broken sh:nope");
    auto out = run_levels(dir);
    if (!(!out.level1_ok && out.level2_ok && out.level3_ok)) ok = false;
    // the violation is located on the corrupted line
    bool located = false;
    for (const auto& [path, syntax] : out.quality.level1)
      for (const auto& e : syntax.errors)
        if (e.line == lines + 1) located = true;
    if (!located) ok = false;
  }

  {  // mutation 2: inject a disjointness clash (shape-less classes)
    std::string dir = fresh_demo("mut2");
    write_file(dir + "/ontology.ttl",
               read_file(dir + "/ontology.ttl") +
                   "\nex:roamingUnit a ex:Sensor , ex:Gateway .\n");
    auto out = run_levels(dir);
    if (!(out.level1_ok && !out.level2_ok && out.level3_ok)) ok = false;
    bool located = false;
    for (const auto& v : out.quality.level2.violations)
      for (const auto& [var, term] : v.bindings)
        if (term == ex("roamingUnit")) located = true;
    if (!located) ok = false;
  }

  {  // mutation 3: delete a mandatory property value (M3's serial number)
    std::string dir = fresh_demo("mut3");
    std::string csv = read_file(dir + "/data/machines.csv");
    std::size_t at = csv.find("SN-1003");
    csv.erase(at, 7);
    write_file(dir + "/data/machines.csv", csv);
    auto out = run_levels(dir);
    if (!(out.level1_ok && out.level2_ok && !out.level3_ok)) ok = false;
    bool located = false;
    for (const auto& v : out.quality.level3_shapes.violations)
      if (v.constraint == "minCount" &&
          v.focus_node == rdf::Term::iri("http://example.org/machine/M3"))
        located = true;
    if (!located) ok = false;
  }

  report(7, ok,
         "three fixture mutations flip exactly quality levels 1, 2, 3");
}

// ---------------------------------------------------------------- 8 ------

void criterion8() {
  std::string dir = fresh_demo("endpoint");
  auto m = pipeline::load_manifest(dir + "/manifest.json");
  auto r = pipeline::run_iteration(m);
  store::TripleStore store;
  store.import(rdf::parse_turtle(read_file(m.ontology_path)));
  store.import(rdf::parse_nquads(read_file(r.graph_artifact)));
  infer::materialize(store, m.ruleset);

  pipeline::SparqlEndpoint endpoint(store);
  bool ok = endpoint.start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", endpoint.port());

  std::vector<std::string> queries;
  const char* preds[] = {"serial",   "model",   "locatedAt", "orderedFor",
                         "product",  "quantity", "status",   "measuredOn",
                         "metric",   "value",   "takenAt",   "atSite",
                         "commissioned", "dueDate", "maintains"};
  for (const char* p : preds) {
    std::string iri = "<http://example.org/" + std::string(p) + ">";
    queries.push_back("SELECT ?s ?o WHERE { ?s " + iri + " ?o }");
    queries.push_back("ASK { ?s " + iri + " ?o }");
    queries.push_back("SELECT ?s ?o WHERE { ?s " + iri +
                      " ?o } ORDER BY ?s ?o LIMIT 3");
  }
  queries.push_back(
      "PREFIX ex: <http://example.org/> SELECT DISTINCT ?t WHERE { ?s a ?t }");
  queries.push_back(
      "PREFIX ex: <http://example.org/> SELECT ?m (COUNT(?o) AS ?n) WHERE "
      "{ ?o ex:orderedFor ?m } GROUP BY ?m");
  queries.push_back(
      "PREFIX ex: <http://example.org/> SELECT ?m ?s WHERE { ?m a ex:Machine "
      "OPTIONAL { ?m ex:serial ?s } }");
  queries.push_back(
      "PREFIX ex: <http://example.org/> SELECT ?x WHERE { { ?x a ex:Site } "
      "UNION { ?x a ex:Product } }");
  queries.push_back(
      "PREFIX ex: <http://example.org/> SELECT ?o ?q WHERE { ?o ex:quantity "
      "?q FILTER(?q >= 250) }");
  if (queries.size() < 50) ok = false;

  int compared = 0;
  for (const auto& text : queries) {
    auto res = client.Post("/sparql", text, "application/sparql-query");
    if (!res || res->status != 200) { ok = false; break; }
    auto direct = query::serialize_result(
        query::evaluate(query::parse_query(text), store),
        query::ResultFormat::SparqlJson);
    // byte-equal after JSON canonicalization
    if (json::parse(res->body).dump() != json::parse(direct).dump()) {
      ok = false;
      break;
    }
    ++compared;
  }
  if (compared < 50) ok = false;

  for (const char* update :
       {"INSERT DATA { <a> <b> <c> }", "DELETE WHERE { ?s ?p ?o }",
        "CLEAR ALL", "DROP GRAPH <g>"}) {
    auto res = client.Post("/sparql", update, "application/sparql-query");
    if (!res || res->status != 405) ok = false;
  }
  endpoint.stop();
  report(8, ok,
         "50 HTTP queries byte-equal in-process results; updates get 405");
}

// ---------------------------------------------------------------- 9 ------

void criterion9() {
  std::string dir = fresh_demo("repro");
  bool ok = run_cli("run --manifest " + dir + "/manifest.json") == 0;
  std::string first = read_file(dir + "/out/iteration-1/graph.nq");
  ok = ok && run_cli("run --manifest " + dir + "/manifest.json") == 0;
  std::string second = read_file(dir + "/out/iteration-1/graph.nq");
  ok = ok && !first.empty() && first == second;
  report(9, ok, "two consecutive runs yield byte-identical N-Quads");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  return g_failures == 0 ? 0 : 1;
}
