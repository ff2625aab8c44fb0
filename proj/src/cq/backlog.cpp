#include "kgf/cq/backlog.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kgf/error.hpp"
#include "kgf/query/eval.hpp"
#include "kgf/query/parser.hpp"

namespace kgf::cq {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::optional<Level> level_from_name(const std::string& n) {
  if (n == "low") return Level::Low;
  if (n == "medium") return Level::Medium;
  if (n == "high") return Level::High;
  return std::nullopt;
}

std::optional<Status> status_from_name(const std::string& n) {
  if (n == "open") return Status::Open;
  if (n == "in_progress") return Status::InProgress;
  if (n == "answered") return Status::Answered;
  if (n == "blocked") return Status::Blocked;
  return std::nullopt;
}

std::optional<Rating> rating_from_name(const std::string& n) {
  if (n == "pass") return Rating::Pass;
  if (n == "fail") return Rating::Fail;
  if (n == "partial") return Rating::Partial;
  if (n == "not_feasible") return Rating::NotFeasible;
  return std::nullopt;
}

std::optional<Expectation> expectation_from_name(const std::string& n) {
  if (n == "nonempty") return Expectation::Nonempty;
  if (n == "empty") return Expectation::Empty;
  if (n == "ask_true") return Expectation::AskTrue;
  if (n == "ask_false") return Expectation::AskFalse;
  if (n == "manual") return Expectation::Manual;
  return std::nullopt;
}

std::string format_rate(double rate) {
  std::ostringstream os;
  os << rate;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

}  // namespace

std::string rating_name(Rating r) {
  switch (r) {
    case Rating::Pass: return "pass";
    case Rating::Fail: return "fail";
    case Rating::Partial: return "partial";
    case Rating::NotFeasible: return "not_feasible";
  }
  return "fail";
}

std::string expectation_name(Expectation e) {
  switch (e) {
    case Expectation::Nonempty: return "nonempty";
    case Expectation::Empty: return "empty";
    case Expectation::AskTrue: return "ask_true";
    case Expectation::AskFalse: return "ask_false";
    case Expectation::Manual: return "manual";
  }
  return "manual";
}

std::vector<CompetencyQuestion> parse_backlog(const std::string& text) {
  std::vector<CompetencyQuestion> backlog;
  std::set<std::string> cq_ids, sub_ids;
  CompetencyQuestion* current_cq = nullptr;
  SubQuestion* current_sub = nullptr;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;

    if (t.front() == '[') {
      if (t.back() != ']')
        throw parse_error(line_no, 1, "unterminated section header");
      std::string inner = trim(t.substr(1, t.size() - 2));
      auto space = inner.find(' ');
      if (space == std::string::npos)
        throw parse_error(line_no, 1,
                          "section must be [cq ID], [bq ID], or [sub ID]");
      std::string kind = inner.substr(0, space);
      std::string id = trim(inner.substr(space + 1));
      if (id.empty()) throw parse_error(line_no, 1, "section id is empty");
      if (kind == "cq" || kind == "bq") {
        if (!cq_ids.insert(id).second)
          throw parse_error(line_no, 1, "duplicate question id '" + id + "'");
        CompetencyQuestion q;
        q.id = id;
        q.kind = kind == "cq" ? Kind::Cq : Kind::BusinessQuestion;
        backlog.push_back(std::move(q));
        current_cq = &backlog.back();
        current_sub = nullptr;
      } else if (kind == "sub") {
        if (!current_cq)
          throw parse_error(line_no, 1,
                            "[sub " + id + "] appears before any question");
        if (!sub_ids.insert(id).second)
          throw parse_error(line_no, 1,
                            "duplicate sub-question id '" + id + "'");
        SubQuestion s;
        s.id = id;
        current_cq->sub_questions.push_back(std::move(s));
        current_sub = &current_cq->sub_questions.back();
      } else {
        throw parse_error(line_no, 1, "unknown section kind '" + kind + "'");
      }
      continue;
    }

    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw parse_error(line_no, 1, "expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (!current_cq)
      throw parse_error(line_no, 1, "'" + key + "' appears before any section");

    if (key == "query") {
      if (!current_sub)
        throw parse_error(line_no, 1, "'query' belongs to a [sub] section");
      if (value == "<<<") {
        std::string q;
        bool closed = false;
        while (std::getline(in, line)) {
          ++line_no;
          if (trim(line) == ">>>") {
            closed = true;
            break;
          }
          q += line;
          q += '\n';
        }
        if (!closed)
          throw parse_error(line_no, 1, "query block not closed with '>>>'");
        current_sub->query = q;
      } else {
        current_sub->query = value;
      }
      continue;
    }

    if (current_sub) {
      if (key == "text") current_sub->text = value;
      else if (key == "notes") current_sub->notes = value;
      else if (key == "expectation") {
        auto e = expectation_from_name(value);
        if (!e)
          throw parse_error(line_no, 1, "unknown expectation '" + value + "'");
        current_sub->expectation = *e;
      } else if (key == "rating") {
        auto r = rating_from_name(value);
        if (!r) throw parse_error(line_no, 1, "unknown rating '" + value + "'");
        current_sub->rating = *r;
      } else {
        throw parse_error(line_no, 1,
                          "unknown sub-question key '" + key + "'");
      }
      continue;
    }

    if (key == "text") current_cq->text = value;
    else if (key == "cluster") current_cq->cluster = value;
    else if (key == "priority") {
      int p = 0;
      try {
        p = std::stoi(value);
      } catch (...) {
        throw parse_error(line_no, 1, "priority must be an integer");
      }
      if (p < 1) throw parse_error(line_no, 1, "priority must be >= 1");
      current_cq->priority = p;
    } else if (key == "status") {
      auto s = status_from_name(value);
      if (!s) throw parse_error(line_no, 1, "unknown status '" + value + "'");
      current_cq->status = *s;
    } else if (key == "cost") {
      auto l = level_from_name(value);
      if (!l) throw parse_error(line_no, 1, "unknown cost '" + value + "'");
      current_cq->cost = *l;
    } else if (key == "benefit") {
      auto l = level_from_name(value);
      if (!l) throw parse_error(line_no, 1, "unknown benefit '" + value + "'");
      current_cq->benefit = *l;
    } else {
      throw parse_error(line_no, 1, "unknown question key '" + key + "'");
    }
  }

  // Attached queries must parse; report with both ids.
  for (const auto& q : backlog) {
    for (const auto& s : q.sub_questions) {
      if (!s.query) continue;
      try {
        query::parse_query(*s.query);
      } catch (const std::exception& e) {
        throw config_error("cq '" + q.id + "' sub-question '" + s.id +
                           "': query does not parse: " + e.what());
      }
    }
  }
  return backlog;
}

std::vector<CompetencyQuestion> load_backlog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open backlog file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_backlog(buf.str());
}

EvaluationTable evaluate_backlog(const std::vector<CompetencyQuestion>& backlog,
                                 const store::TripleStore& store,
                                 const std::string& iteration_label,
                                 const std::string& timestamp) {
  EvaluationTable table;
  table.iteration_label = iteration_label;
  table.timestamp = timestamp;

  std::size_t passes = 0, evaluable = 0;
  for (const auto& q : backlog) {
    for (const auto& s : q.sub_questions) {
      EvaluationRow row;
      row.cq_id = q.id;
      row.sub_question_id = s.id;
      row.query_present = s.query.has_value();

      if (s.query && s.expectation != Expectation::Manual) {
        try {
          auto result = query::evaluate(query::parse_query(*s.query), store);
          bool pass = false;
          if (result.form == query::QueryForm::Ask) {
            row.result_summary = result.boolean ? "true" : "false";
            if (s.expectation == Expectation::AskTrue) pass = result.boolean;
            else if (s.expectation == Expectation::AskFalse)
              pass = !result.boolean;
            else
              row.result_summary += " (expectation mismatch: ASK query)";
          } else if (result.form == query::QueryForm::Select) {
            std::size_t n = result.solutions.rows.size();
            row.result_summary = std::to_string(n) + " rows";
            if (s.expectation == Expectation::Nonempty) pass = n > 0;
            else if (s.expectation == Expectation::Empty) pass = n == 0;
            else
              row.result_summary += " (expectation mismatch: SELECT query)";
          } else {
            row.result_summary = "CONSTRUCT not usable for evaluation";
          }
          row.rating = rating_name(pass ? Rating::Pass : Rating::Fail);
          row.required_work =
              pass ? "" : "investigate failing query or extend the graph";
        } catch (const std::exception& e) {
          row.result_summary = std::string("query failed: ") + e.what();
          row.rating = rating_name(Rating::Fail);
          row.required_work = "fix the attached query";
        }
      } else if (s.rating) {
        row.rating = rating_name(*s.rating);
        row.result_summary = "manual rating";
        row.required_work = s.notes;
      } else if (!s.query) {
        row.rating = rating_name(Rating::NotFeasible);
        row.result_summary = "no query attached";
        row.required_work = "write a SPARQL query for this sub-question";
      } else {
        row.rating = rating_name(Rating::NotFeasible);
        row.result_summary = "manual evaluation required";
        row.required_work = "evaluate manually and record a rating";
      }

      if (q.kind == Kind::Cq && s.expectation != Expectation::Manual) {
        ++evaluable;
        if (row.rating == "pass") ++passes;
      }
      table.rows.push_back(std::move(row));
    }
  }
  if (evaluable == 0) {
    table.fulfillment_rate = 0.0;
    table.note = "no evaluable CQs";
  } else {
    table.fulfillment_rate =
        static_cast<double>(passes) / static_cast<double>(evaluable);
  }
  return table;
}

CostBenefitMatrix build_cost_benefit(
    const std::vector<CompetencyQuestion>& backlog) {
  CostBenefitMatrix m;
  m.quadrants = {{"quick_win", {}}, {"strategic", {}}, {"fill_in", {}},
                 {"reconsider", {}}};
  for (const auto& q : backlog) {
    if (!q.cost || !q.benefit) {
      m.unclassified.push_back(q.id);
      continue;
    }
    // medium resolves optimistically: medium benefit counts as high,
    // medium cost counts as low — flagged so readers see the default at work
    bool benefit_high = *q.benefit != Level::Low;
    bool cost_low = *q.cost != Level::High;
    if (*q.benefit == Level::Medium || *q.cost == Level::Medium)
      m.flagged.push_back(q.id);
    std::string quadrant;
    if (benefit_high && cost_low) quadrant = "quick_win";
    else if (benefit_high) quadrant = "strategic";
    else if (cost_low) quadrant = "fill_in";
    else quadrant = "reconsider";
    m.quadrants[quadrant].push_back(q.id);
  }
  return m;
}

std::optional<TableFormat> table_format_from_name(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "markdown" || name == "md") return TableFormat::Markdown;
  if (name == "json") return TableFormat::Json;
  return std::nullopt;
}

std::string render_table(const EvaluationTable& table, TableFormat format) {
  static const char* kColumns[] = {"cq_id",          "sub_question_id",
                                   "query_present",  "result_summary",
                                   "rating",         "required_work"};
  switch (format) {
    case TableFormat::Csv: {
      std::string out;
      for (int i = 0; i < 6; ++i) {
        if (i) out += ',';
        out += kColumns[i];
      }
      out += "\r\n";
      for (const auto& r : table.rows) {
        out += csv_field(r.cq_id) + ',' + csv_field(r.sub_question_id) + ',' +
               (r.query_present ? "true" : "false") + ',' +
               csv_field(r.result_summary) + ',' + csv_field(r.rating) + ',' +
               csv_field(r.required_work) + "\r\n";
      }
      out += "fulfillment_rate," + format_rate(table.fulfillment_rate) +
             ",,,,\r\n";
      return out;
    }
    case TableFormat::Markdown: {
      std::string out = "|";
      for (const auto* c : kColumns) out += std::string(" ") + c + " |";
      out += "\n|";
      for (int i = 0; i < 6; ++i) out += " --- |";
      out += "\n";
      for (const auto& r : table.rows) {
        out += "| " + r.cq_id + " | " + r.sub_question_id + " | " +
               (r.query_present ? "true" : "false") + " | " +
               r.result_summary + " | " + r.rating + " | " + r.required_work +
               " |\n";
      }
      out += "\n**Fulfillment rate:** " + format_rate(table.fulfillment_rate) +
             "\n";
      if (!table.note.empty()) out += "\n_" + table.note + "_\n";
      return out;
    }
    case TableFormat::Json: {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : table.rows) {
        rows.push_back({{"cq_id", r.cq_id},
                        {"sub_question_id", r.sub_question_id},
                        {"query_present", r.query_present},
                        {"result_summary", r.result_summary},
                        {"rating", r.rating},
                        {"required_work", r.required_work}});
      }
      nlohmann::json j{{"rows", rows},
                       {"fulfillment_rate", table.fulfillment_rate},
                       {"timestamp", table.timestamp},
                       {"iteration_label", table.iteration_label}};
      if (!table.note.empty()) j["note"] = table.note;
      return j.dump(2) + "\n";
    }
  }
  return "";
}

}  // namespace kgf::cq
