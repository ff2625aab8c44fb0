#pragma once

#include "kgf/query/ast.hpp"
#include "kgf/store/store.hpp"

namespace kgf::query {

struct QueryResult {
  QueryForm form = QueryForm::Select;
  SolutionSequence solutions;  // SELECT
  bool boolean = false;        // ASK
  rdf::Graph graph;            // CONSTRUCT
};

/// Evaluates a parsed query against the store's default graph.
/// Valid queries never throw; type errors inside FILTER make that filter
/// false for the row.
QueryResult evaluate(const Query& query, const store::TripleStore& store);

/// Group evaluation alone (exposed for the shapes validator).
std::vector<Binding> evaluate_group(const GroupPattern& group,
                                    const store::TripleStore& store);

}  // namespace kgf::query
