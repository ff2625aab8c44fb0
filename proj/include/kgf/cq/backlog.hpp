#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgf/store/store.hpp"

namespace kgf::cq {

enum class Kind { Cq, BusinessQuestion };
enum class Status { Open, InProgress, Answered, Blocked };
enum class Level { Low, Medium, High };
enum class Rating { Pass, Fail, Partial, NotFeasible };
enum class Expectation { Nonempty, Empty, AskTrue, AskFalse, Manual };

std::string rating_name(Rating r);
std::string expectation_name(Expectation e);

struct SubQuestion {
  std::string id;
  std::string text;
  std::optional<std::string> query;
  Expectation expectation = Expectation::Manual;
  std::optional<Rating> rating;  // explicit manual entry in the backlog file
  std::string notes;
};

struct CompetencyQuestion {
  std::string id;
  std::string text;
  std::optional<std::string> cluster;
  int priority = 1;  // 1 = highest
  Kind kind = Kind::Cq;
  Status status = Status::Open;
  std::vector<SubQuestion> sub_questions;
  std::optional<Level> cost;
  std::optional<Level> benefit;
};

/// Parses the backlog text format (see docs/backlog_format.md): `[cq ID]`
/// and `[bq ID]` sections with `key = value` lines, `[sub ID]` sections
/// nested under the preceding question, and `query = <<<` ... `>>>` blocks.
/// Errors: duplicate ids, malformed entries, unparseable attached queries
/// (reported with the cq/sub-question ids).
std::vector<CompetencyQuestion> parse_backlog(const std::string& text);
std::vector<CompetencyQuestion> load_backlog(const std::string& path);

struct EvaluationRow {
  std::string cq_id;
  std::string sub_question_id;
  bool query_present = false;
  std::string result_summary;
  std::string rating;
  std::string required_work;
};

struct EvaluationTable {
  std::vector<EvaluationRow> rows;
  double fulfillment_rate = 0.0;
  std::string timestamp;
  std::string iteration_label;
  std::string note;  // e.g. "no evaluable CQs"
};

/// Runs every executable sub-question against the store. Ratings follow the
/// expectation (nonempty, empty, ask_true, ask_false); manual-expectation and
/// query-less rows are rated not_feasible with a required_work note, unless
/// the backlog carries an explicit rating. fulfillment_rate = passes divided
/// by the evaluable sub-questions (kind cq, expectation not manual); 0/0 = 0.
EvaluationTable evaluate_backlog(const std::vector<CompetencyQuestion>& backlog,
                                 const store::TripleStore& store,
                                 const std::string& iteration_label = "",
                                 const std::string& timestamp = "");

struct CostBenefitMatrix {
  std::map<std::string, std::vector<std::string>> quadrants;
  // keys: quick_win, strategic, fill_in, reconsider
  std::vector<std::string> unclassified;  // missing cost or benefit
  std::vector<std::string> flagged;       // classified via the medium rule
};

/// Quadrants: benefit high & cost low → quick_win; high/high → strategic;
/// low/low → fill_in; low/high → reconsider. Medium benefit counts as high
/// and medium cost counts as low; such CQs are flagged.
CostBenefitMatrix build_cost_benefit(
    const std::vector<CompetencyQuestion>& backlog);

enum class TableFormat { Csv, Markdown, Json };
std::optional<TableFormat> table_format_from_name(const std::string& name);

/// Renders with the fixed column order cq_id, sub_question_id, query_present,
/// result_summary, rating, required_work, plus a fulfillment-rate footer.
std::string render_table(const EvaluationTable& table, TableFormat format);

}  // namespace kgf::cq
