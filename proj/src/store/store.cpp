#include "kgf/store/store.hpp"

namespace kgf::store {

namespace {

// Range scan over a permutation index given a bound prefix.
template <typename Fn>
void scan(const std::set<std::array<TermId, 3>>& index,
          const std::vector<TermId>& prefix, Fn&& fn) {
  std::array<TermId, 3> low{0, 0, 0};
  for (std::size_t i = 0; i < prefix.size(); ++i) low[i] = prefix[i];
  for (auto it = index.lower_bound(low); it != index.end(); ++it) {
    bool in_range = true;
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if ((*it)[i] != prefix[i]) {
        in_range = false;
        break;
      }
    if (!in_range) break;
    fn(*it);
  }
}

}  // namespace

TermId TripleStore::intern(const rdf::Term& t) {
  auto it = ids_.find(t);
  if (it != ids_.end()) return it->second;
  TermId id = static_cast<TermId>(terms_.size());
  terms_.push_back(t);
  ids_.emplace(t, id);
  return id;
}

std::optional<TermId> TripleStore::lookup(const rdf::Term& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const TripleStore::GraphIndexes* TripleStore::find_graph(
    const std::optional<std::string>& name) const {
  if (!name) return &default_graph_;
  auto it = named_graphs_.find(*name);
  return it == named_graphs_.end() ? nullptr : &it->second;
}

bool TripleStore::insert(const rdf::Triple& t,
                         const std::optional<std::string>& target_graph) {
  TermId s = intern(t.subject);
  TermId p = intern(t.predicate);
  TermId o = intern(t.object);
  GraphIndexes& g =
      target_graph ? named_graphs_[*target_graph] : default_graph_;
  if (!g.spo.insert({s, p, o}).second) return false;
  g.pos.insert({p, o, s});
  g.osp.insert({o, s, p});
  return true;
}

std::size_t TripleStore::import(const rdf::Graph& graph,
                                const std::optional<std::string>& target) {
  std::size_t added = 0;
  for (const auto& t : graph)
    if (insert(t, target)) ++added;
  return added;
}

std::size_t TripleStore::import(const rdf::Dataset& dataset,
                                const std::optional<std::string>& target) {
  std::size_t added = import(dataset.default_graph(), target);
  for (const auto& [iri, g] : dataset.named_graphs())
    added += import(g, target ? target : std::optional<std::string>(iri));
  return added;
}

std::vector<rdf::Triple> TripleStore::match(
    const TriplePattern& pattern,
    const std::optional<std::string>& graph) const {
  std::vector<rdf::Triple> out;
  const GraphIndexes* g = find_graph(graph);
  if (!g) return out;

  std::optional<TermId> s, p, o;
  if (pattern.subject && !(s = lookup(*pattern.subject))) return out;
  if (pattern.predicate && !(p = lookup(*pattern.predicate))) return out;
  if (pattern.object && !(o = lookup(*pattern.object))) return out;

  auto emit_spo = [&](TermId a, TermId b, TermId c) {
    out.push_back({terms_[a], terms_[b], terms_[c]});
  };

  // Longest bound prefix picks the index.
  if (s) {
    std::vector<TermId> prefix{*s};
    if (p) {
      prefix.push_back(*p);
      if (o) prefix.push_back(*o);
    }
    scan(g->spo, prefix, [&](const auto& row) {
      if (!p || row[1] == *p)
        if (!o || row[2] == *o) emit_spo(row[0], row[1], row[2]);
    });
  } else if (p) {
    std::vector<TermId> prefix{*p};
    if (o) prefix.push_back(*o);
    scan(g->pos, prefix,
         [&](const auto& row) { emit_spo(row[2], row[0], row[1]); });
  } else if (o) {
    scan(g->osp, {*o},
         [&](const auto& row) { emit_spo(row[1], row[2], row[0]); });
  } else {
    for (const auto& row : g->spo) emit_spo(row[0], row[1], row[2]);
  }
  return out;
}

bool TripleStore::contains(const rdf::Triple& t,
                           const std::optional<std::string>& graph) const {
  const GraphIndexes* g = find_graph(graph);
  if (!g) return false;
  auto s = lookup(t.subject), p = lookup(t.predicate), o = lookup(t.object);
  if (!s || !p || !o) return false;
  return g->spo.count({*s, *p, *o}) > 0;
}

std::size_t TripleStore::size(const std::optional<std::string>& graph) const {
  const GraphIndexes* g = find_graph(graph);
  return g ? g->spo.size() : 0;
}

StoreStats TripleStore::stats() const {
  StoreStats st;
  std::set<TermId> subjects, predicates, objects;
  auto count = [&](const GraphIndexes& g) {
    if (g.spo.empty()) return;
    ++st.graph_count;
    st.triple_count += g.spo.size();
    for (const auto& row : g.spo) {
      subjects.insert(row[0]);
      predicates.insert(row[1]);
      objects.insert(row[2]);
    }
  };
  count(default_graph_);
  for (const auto& [_, g] : named_graphs_) count(g);
  st.distinct_subjects = subjects.size();
  st.distinct_predicates = predicates.size();
  st.distinct_objects = objects.size();
  return st;
}

rdf::Graph TripleStore::to_graph(const std::optional<std::string>& graph) const {
  rdf::Graph out;
  const GraphIndexes* g = find_graph(graph);
  if (!g) return out;
  for (const auto& row : g->spo)
    out.insert(terms_[row[0]], terms_[row[1]], terms_[row[2]]);
  return out;
}

}  // namespace kgf::store
