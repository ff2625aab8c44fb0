#include <random>

#include "doctest.h"
#include "kgf/error.hpp"
#include "kgf/prep/clean.hpp"
#include "kgf/prep/join.hpp"
#include "kgf/prep/profile.hpp"

using namespace kgf::prep;

namespace {

Table make_table(std::vector<std::string> cols,
                 std::vector<std::vector<Cell>> rows,
                 const std::string& name = "t") {
  Table t;
  t.name = name;
  for (auto& c : cols) t.columns.push_back({std::move(c), {}});
  t.rows = std::move(rows);
  return t;
}

}  // namespace

TEST_CASE("csv parsing basics") {
  Table t = parse_csv("a,b\n1,2\n3,4\n");
  CHECK(t.columns.size() == 2);
  CHECK(t.columns[0].name == "a");
  REQUIRE(t.rows.size() == 2);
  CHECK(*t.rows[1][1] == "4");

  Table no_header = parse_csv("1,2\n", {',', false});
  CHECK(no_header.columns[0].name == "col1");
  CHECK(no_header.rows.size() == 1);

  Table tsv = parse_csv("a\tb\n1\t2\n", {'\t', true});
  CHECK(*tsv.rows[0][0] == "1");
}

TEST_CASE("null markers map to null cells") {
  CsvOptions opt;
  opt.null_markers = {"", "NA"};
  Table t = parse_csv("a,b\n,NA\nx,y\n", opt);
  CHECK_FALSE(t.rows[0][0].has_value());
  CHECK_FALSE(t.rows[0][1].has_value());
  CHECK(t.rows[1][0].has_value());
}

TEST_CASE("rfc 4180 quoting") {
  // oracle: quoted field with delimiter stays one cell, "" unescapes
  Table t = parse_csv("a,b\n\"x,y\",\"he said \"\"hi\"\"\"\n");
  REQUIRE(t.rows.size() == 1);
  CHECK(*t.rows[0][0] == "x,y");
  CHECK(*t.rows[0][1] == "he said \"hi\"");
  Table nl = parse_csv("a\n\"line1\nline2\"\n");
  CHECK(*nl.rows[0][0] == "line1\nline2");
}

TEST_CASE("ragged rows and bad bytes are errors") {
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), kgf::parse_error);
  try {
    parse_csv("a,b\n1,2\n3\n");
  } catch (const kgf::parse_error& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_csv(std::string("a,b\n\xff\xfe,2\n")),
                  kgf::config_error);
}

TEST_CASE("profile returns the five criteria in order") {
  Table t = make_table({"x"}, {{Cell{"1"}}});
  QualityProfile p = profile(t);
  CHECK(p.criteria[0].criterion == "unambiguous_interpretability");
  CHECK(p.criteria[1].criterion == "uniform_representation");
  CHECK(p.criteria[2].criterion == "credibility");
  CHECK(p.criteria[3].criterion == "faultlessness");
  CHECK(p.criteria[4].criterion == "completeness");
  CHECK_FALSE(p.criteria[0].score.has_value());  // manual
  CHECK_FALSE(p.criteria[2].score.has_value());  // manual
}

TEST_CASE("completeness arithmetic") {
  Table full = make_table({"a", "b"}, {{Cell{"1"}, Cell{"2"}}});
  CHECK(*profile(full).entry("completeness").score == 1.0);
  // 10 cells, 2 null -> 0.8
  Table t = make_table({"a", "b"},
                       {{Cell{"1"}, Cell{}},
                        {Cell{"1"}, Cell{"2"}},
                        {Cell{}, Cell{"2"}},
                        {Cell{"1"}, Cell{"2"}},
                        {Cell{"1"}, Cell{"2"}}});
  CHECK(*profile(t).entry("completeness").score == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("uniform representation flags mixed date formats") {
  Table t = make_table({"d"}, {{Cell{"2021-01-02"}}, {Cell{"02.01.2021"}}});
  QualityProfile p = profile(t);
  const auto& u = p.entry("uniform_representation");
  CHECK(*u.score == doctest::Approx(0.5));
  REQUIRE(u.findings.size() == 1);
  CHECK(u.findings[0].column == "d");
}

TEST_CASE("faultlessness counts unparseable cells under inferred type") {
  // 19 integers and one stray string: integer wins inference (>=95%)
  std::vector<std::vector<Cell>> rows;
  for (int i = 0; i < 19; ++i) rows.push_back({Cell{std::to_string(i)}});
  rows.push_back({Cell{"oops"}});
  Table t = make_table({"n"}, rows);
  CHECK(infer_column_type(t, 0) == ColumnType::Integer);
  QualityProfile p = profile(t);
  CHECK(*p.entry("faultlessness").score == doctest::Approx(19.0 / 20.0));
}

TEST_CASE("clean operations") {
  Table t = make_table({"a", "b"}, {{Cell{" x "}, Cell{"ABC"}},
                                    {Cell{"abc"}, Cell{}}});
  auto [trimmed, log1] = clean(t, {CleanOp::trim()});
  CHECK(*trimmed.rows[0][0] == "x");

  auto [lowered, log2] = clean(t, {CleanOp::lowercase("b")});
  CHECK(*lowered.rows[0][1] == "abc");

  auto [cast, log3] = clean(t, {CleanOp::cast("a", ColumnType::Integer)});
  CHECK_FALSE(cast.rows[0][0].has_value());
  CHECK(log3.entries[0].cast_failures == 2);

  auto [dropped, log4] =
      clean(t, {CleanOp::drop_rows_where_null({"a", "b"})});
  CHECK(dropped.rows.size() == 1);
  CHECK(log4.entries[0].rows_dropped == 1);

  auto [replaced, log5] = clean(t, {CleanOp::replace("b", "BC", "x")});
  CHECK(*replaced.rows[0][1] == "Ax");

  CHECK_THROWS_AS(clean(t, {CleanOp::lowercase("zzz")}), kgf::config_error);
}

TEST_CASE("drop_rows_where_null on all columns yields completeness 1.0") {
  Table t = make_table({"a", "b"}, {{Cell{"1"}, Cell{}},
                                    {Cell{"1"}, Cell{"2"}}});
  auto [cleaned, _] = clean(t, {CleanOp::drop_rows_where_null({"a", "b"})});
  REQUIRE(!cleaned.rows.empty());
  CHECK(*profile(cleaned).entry("completeness").score == 1.0);
}

TEST_CASE("denormalize joins") {
  std::map<std::string, Table> tables;
  tables["orders"] = make_table(
      {"id", "machine"},
      {{Cell{"o1"}, Cell{"m1"}}, {Cell{"o2"}, Cell{"m2"}},
       {Cell{"o3"}, Cell{}}},
      "orders");
  tables["machines"] = make_table(
      {"id", "site"},
      {{Cell{"m1"}, Cell{"s1"}}, {Cell{"m1"}, Cell{"s2"}},
       {Cell{"m9"}, Cell{"s3"}}},
      "machines");

  JoinSpec spec{"orders", "machines", "machine", "id", JoinSpec::Left, true};
  Table joined = denormalize(tables, spec);
  // o1 matches twice, o2 and o3 unmatched but kept
  CHECK(joined.rows.size() == 4);
  CHECK(joined.columns.back().name == "machines.site");
  // unmatched rows have null right columns
  std::size_t with_null_right = 0;
  for (const auto& row : joined.rows)
    if (!row.back()) ++with_null_right;
  CHECK(with_null_right == 2);

  spec.kind = JoinSpec::Inner;
  Table inner = denormalize(tables, spec);
  CHECK(inner.rows.size() == 2);  // both o1 matches only

  spec.left_key = "nope";
  CHECK_THROWS_WITH_AS(denormalize(tables, spec),
                       doctest::Contains("orders"), kgf::config_error);
}

TEST_CASE("denormalize equals nested-loop oracle on random tables") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> key(0, 6), nrows(0, 40);
  for (int round = 0; round < 40; ++round) {
    std::map<std::string, Table> tables;
    std::vector<std::vector<Cell>> lrows, rrows;
    int ln = nrows(rng), rn = nrows(rng);
    for (int i = 0; i < ln; ++i)
      lrows.push_back({Cell{"l" + std::to_string(i)},
                       key(rng) == 0 ? Cell{} : Cell{"k" + std::to_string(key(rng))}});
    for (int i = 0; i < rn; ++i)
      rrows.push_back({Cell{"k" + std::to_string(key(rng))},
                       Cell{"v" + std::to_string(i)}});
    tables["L"] = make_table({"id", "k"}, lrows, "L");
    tables["R"] = make_table({"k", "v"}, rrows, "R");

    for (auto kind : {JoinSpec::Inner, JoinSpec::Left}) {
      JoinSpec spec{"L", "R", "k", "k", kind, false};
      Table joined = denormalize(tables, spec);

      // nested-loop oracle
      std::size_t expected = 0;
      std::size_t max_mult = 0;
      for (const auto& lrow : lrows) {
        std::size_t matches = 0;
        for (const auto& rrow : rrows)
          if (lrow[1] && rrow[0] && *lrow[1] == *rrow[0]) ++matches;
        max_mult = std::max(max_mult, matches);
        expected += matches;
        if (matches == 0 && kind == JoinSpec::Left) ++expected;
      }
      CHECK(joined.rows.size() == expected);
      if (kind == JoinSpec::Inner)
        CHECK(joined.rows.size() <= lrows.size() * std::max<std::size_t>(max_mult, 1));
    }
  }
}

TEST_CASE("clean is deterministic") {
  Table t = make_table({"a"}, {{Cell{" X "}}, {Cell{"y"}}});
  std::vector<CleanOp> ops = {CleanOp::trim(), CleanOp::lowercase("a")};
  auto [a, _1] = clean(t, ops);
  auto [b, _2] = clean(t, ops);
  CHECK(a.rows == b.rows);
}
