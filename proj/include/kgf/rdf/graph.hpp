#pragma once

#include <map>
#include <set>
#include <string>

#include "kgf/rdf/term.hpp"

namespace kgf::rdf {

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
};

/// A set of triples. Duplicate insertion is a no-op; iteration order is the
/// term ordering, which keeps serialization deterministic.
class Graph {
 public:
  using const_iterator = std::set<Triple>::const_iterator;

  bool insert(Triple t) { return triples_.insert(std::move(t)).second; }
  bool insert(Term s, Term p, Term o) {
    return insert(Triple{std::move(s), std::move(p), std::move(o)});
  }
  bool contains(const Triple& t) const { return triples_.count(t) > 0; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  std::size_t merge(const Graph& other) {
    std::size_t added = 0;
    for (const auto& t : other.triples_)
      if (triples_.insert(t).second) ++added;
    return added;
  }

  const_iterator begin() const { return triples_.begin(); }
  const_iterator end() const { return triples_.end(); }

  bool operator==(const Graph&) const = default;

 private:
  std::set<Triple> triples_;
};

class Dataset {
 public:
  Graph& default_graph() { return default_; }
  const Graph& default_graph() const { return default_; }

  Graph& named_graph(const std::string& iri) { return named_[iri]; }
  const std::map<std::string, Graph>& named_graphs() const { return named_; }

  std::size_t triple_count() const {
    std::size_t n = default_.size();
    for (const auto& [_, g] : named_) n += g.size();
    return n;
  }

  bool operator==(const Dataset&) const = default;

 private:
  Graph default_;
  std::map<std::string, Graph> named_;
};

}  // namespace kgf::rdf
