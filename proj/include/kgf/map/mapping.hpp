#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgf/prep/table.hpp"
#include "kgf/rdf/graph.hpp"

namespace kgf::map {

/// A template producing one RDF term per source row.
struct TermTemplate {
  enum class Kind {
    IriTemplate,      // IRI with {column} placeholders, percent-encoded values
    ConstantIri,      // fixed IRI, no placeholders
    ColumnLiteral,    // literal taken from one column
    ConstantLiteral,  // fixed literal
    RowBlank,         // fresh blank node per row
  };

  Kind kind = Kind::ConstantIri;
  std::string text;      // template / constant IRI / constant literal value
  std::string column;    // ColumnLiteral only
  std::string datatype;  // optional literal datatype IRI
  std::string language;  // optional literal language tag
  std::vector<std::string> placeholders;  // columns referenced by IriTemplate

  /// Columns this template reads.
  std::vector<std::string> columns() const {
    if (kind == Kind::ColumnLiteral) return {column};
    return placeholders;
  }
};

struct RowFilter {
  enum class Op { Present, Absent, Eq, Ne };
  std::string column;
  Op op = Op::Present;
  std::string value;  // Eq / Ne only
};

struct MappingStatement {
  std::string predicate;  // absolute IRI
  TermTemplate object;
};

struct MappingRule {
  std::string name;
  std::string source;  // table name
  TermTemplate subject;
  std::vector<MappingStatement> statements;
  std::vector<RowFilter> filters;  // all must pass
};

struct MappingPlan {
  std::vector<MappingRule> rules;
  std::map<std::string, std::string> prefixes;
};

struct SkippedStatement {
  std::string rule;
  std::size_t row = 0;  // 0-based data row index
  std::string column;   // offending column, empty for subject-level skips
  std::string reason;
};

struct MappingLog {
  std::size_t rows_processed = 0;
  std::size_t rows_filtered = 0;
  std::size_t triples_emitted = 0;       // instantiated, before de-duplication
  std::size_t duplicates_collapsed = 0;  // triples_emitted - graph size
  std::vector<SkippedStatement> skipped_statements;
};

/// Parses and validates a mapping document. The format is line oriented:
///
///   prefix ex: <http://example.org/>
///
///   rule machine from machines
///     subject iri <http://example.org/machine/{id}>
///     type ex:Machine
///     ex:name literal {name}
///     ex:weight literal {weight} ^^xsd:decimal
///     ex:site iri <http://example.org/site/{site_id}>
///     when status = "active"
///   end
///
/// Statement forms: `type <class>`; `<pred> literal {col} [^^dt | @lang]`;
/// `<pred> literal "constant" [^^dt | @lang]`; `<pred> iri <template>`;
/// `subject` accepts `iri <template>` or `blank`.
/// Filters: `when <col> present|absent`, `when <col> = "v"`, `when <col> != "v"`.
/// Errors: unknown prefix, malformed template, empty rule set.
MappingPlan compile_mapping(const std::string& document);

/// Instantiates every rule over its source table. Missing tables or columns
/// raise an error before any row is processed; per-row problems (null cells,
/// non-absolute substituted IRIs) skip the affected statements and are logged.
std::pair<rdf::Graph, MappingLog> apply_mapping(
    const MappingPlan& plan, const std::map<std::string, prep::Table>& tables);

struct IntegrityQuery {
  std::string name;
  std::string text;          // ASK or SELECT
  bool expect_empty = false; // SELECT passes when it yields no rows
};

struct IntegrityResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs each query against the graph: ASK passes iff true; SELECT passes iff
/// nonempty, or empty when expect_empty is set.
std::vector<IntegrityResult> run_integrity_queries(
    const rdf::Graph& graph, const std::vector<IntegrityQuery>& queries);

/// Percent-encodes every character outside the RFC 3986 unreserved set.
std::string percent_encode(const std::string& value);

/// Splits an IRI template into literal pieces and {column} placeholders;
/// throws on unbalanced or empty braces. Returned pairs are (literal_prefix,
/// placeholder); a trailing pair may have an empty placeholder.
std::vector<std::pair<std::string, std::string>> tokenize_template(
    const std::string& tpl);

}  // namespace kgf::map
