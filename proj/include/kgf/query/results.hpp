#pragma once

#include <string>

#include "kgf/query/eval.hpp"

namespace kgf::query {

enum class ResultFormat { SparqlJson, Csv };

/// SPARQL 1.1 JSON results (head.vars + results.bindings) or CSV with a
/// header row of variable names.
std::string serialize_results(const SolutionSequence& solutions,
                              ResultFormat format);

/// ASK result: {"head":{},"boolean":b} (JSON) or a single true/false cell.
std::string serialize_ask(bool value, ResultFormat format);

/// Dispatches on the result's form; CONSTRUCT results serialize as Turtle.
std::string serialize_result(const QueryResult& result, ResultFormat format);

}  // namespace kgf::query
