// Random query-text generator over the supported fragment. Uses the same
// term pool as random_rdf.hpp so joins and filters actually hit data.
#pragma once

#include <random>
#include <string>

namespace kgf::testsupport {

class QueryGenerator {
 public:
  explicit QueryGenerator(std::mt19937& rng, int pool = 12)
      : rng_(rng), pool_(pool) {}

  // SELECT or ASK text drawn from: BGP (1..3), OPTIONAL, UNION, FILTER,
  // DISTINCT.
  std::string generate(bool ask = false) {
    std::string body = group_body(2);
    if (ask) return "ASK { " + body + " }";
    std::string q = "SELECT ";
    if (chance(30)) q += "DISTINCT ";
    q += "* WHERE { " + body + " }";
    return q;
  }

 private:
  std::mt19937& rng_;
  int pool_;

  bool chance(int percent) {
    return std::uniform_int_distribution<int>(0, 99)(rng_) < percent;
  }
  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  std::string var() { return "?v" + std::to_string(uniform(0, 4)); }
  std::string iri() {
    return "<http://example.org/n" + std::to_string(uniform(0, pool_ - 1)) +
           ">";
  }
  std::string constant() {
    switch (uniform(0, 3)) {
      case 0: return iri();
      case 1: return "\"v" + std::to_string(uniform(0, pool_ - 1)) + "\"";
      case 2: return std::to_string(uniform(0, pool_ - 1));
      default:
        return "\"v" + std::to_string(uniform(0, pool_ - 1)) + "\"@" +
               (chance(50) ? "en" : "de-AT");
    }
  }

  std::string pattern() {
    std::string s = chance(60) ? var() : iri();
    std::string p = chance(50) ? var() : iri();
    std::string o = chance(60) ? var() : constant();
    return s + " " + p + " " + o + " .";
  }

  std::string bgp(int max_patterns) {
    std::string out;
    int n = uniform(1, max_patterns);
    for (int i = 0; i < n; ++i) out += " " + pattern();
    return out;
  }

  std::string filter_expr(int depth = 0) {
    if (depth < 1 && chance(30)) {
      std::string op = chance(50) ? " && " : " || ";
      return "(" + filter_expr(depth + 1) + op + filter_expr(depth + 1) + ")";
    }
    switch (uniform(0, 5)) {
      case 0: return "BOUND(" + var() + ")";
      case 1: return var() + " = " + constant();
      case 2: {
        static const char* ops[] = {"<", "<=", ">", ">=", "!="};
        return var() + " " + ops[uniform(0, 4)] + " " +
               std::to_string(uniform(0, pool_ - 1));
      }
      case 3: return "REGEX(" + var() + ", \"v[0-9]\")";
      case 4: return var() + " IN (" + constant() + ", " + constant() + ")";
      default: return "!(" + var() + " = " + constant() + ")";
    }
  }

  std::string group_body(int depth) {
    std::string out = bgp(3);
    if (depth > 0 && chance(35))
      out += " OPTIONAL { " + group_body(depth - 1) + " }";
    if (depth > 0 && chance(30))
      out += " { " + bgp(2) + " } UNION { " + bgp(2) + " }";
    if (chance(45)) out += " FILTER(" + filter_expr() + ")";
    return out;
  }
};

}  // namespace kgf::testsupport
