#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgf/rdf/graph.hpp"

namespace kgf::store {

using TermId = std::uint32_t;

/// A triple pattern; unset positions are wildcards.
struct TriplePattern {
  std::optional<rdf::Term> subject;
  std::optional<rdf::Term> predicate;
  std::optional<rdf::Term> object;
};

struct StoreStats {
  std::size_t triple_count = 0;
  std::size_t graph_count = 0;
  std::size_t distinct_subjects = 0;
  std::size_t distinct_predicates = 0;
  std::size_t distinct_objects = 0;

  bool operator==(const StoreStats&) const = default;
};

/// In-memory indexed store over a dataset. Terms are interned into integer
/// ids; each graph keeps three permutation indexes (SPO, POS, OSP) and a
/// pattern is routed to the index with the longest bound prefix.
class TripleStore {
 public:
  std::size_t import(const rdf::Graph& graph,
                     const std::optional<std::string>& target_graph = {});
  std::size_t import(const rdf::Dataset& dataset,
                     const std::optional<std::string>& target_graph = {});
  bool insert(const rdf::Triple& t,
              const std::optional<std::string>& target_graph = {});

  /// Stored triples matching the pattern, each exactly once, in index order.
  /// An unknown named graph yields an empty result.
  std::vector<rdf::Triple> match(
      const TriplePattern& pattern,
      const std::optional<std::string>& graph = {}) const;

  bool contains(const rdf::Triple& t,
                const std::optional<std::string>& graph = {}) const;

  std::size_t size(const std::optional<std::string>& graph = {}) const;
  StoreStats stats() const;

  /// Export one graph's contents.
  rdf::Graph to_graph(const std::optional<std::string>& graph = {}) const;

  const rdf::Term& term(TermId id) const { return terms_[id]; }

 private:
  struct GraphIndexes {
    std::set<std::array<TermId, 3>> spo;
    std::set<std::array<TermId, 3>> pos;
    std::set<std::array<TermId, 3>> osp;
  };

  TermId intern(const rdf::Term& t);
  std::optional<TermId> lookup(const rdf::Term& t) const;
  const GraphIndexes* find_graph(const std::optional<std::string>& name) const;

  std::vector<rdf::Term> terms_;
  std::map<rdf::Term, TermId> ids_;
  GraphIndexes default_graph_;
  std::map<std::string, GraphIndexes> named_graphs_;
};

}  // namespace kgf::store
