#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"
#include "predjoin/sql.hpp"

using namespace predjoin;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Internal;
}

const char* kTwoHop =
    "SELECT * FROM Person P1, Follows F1, Person P2, Follows F2, Person P3 "
    "WHERE P1.ID = F1.ID1 AND F1.ID2 = P2.ID AND P2.ID = F2.ID1 AND F2.ID2 = P3.ID AND P1.name = 'Karim'";

}  // namespace

TEST_CASE("running example query resolves") {
  Catalog c = oracle::running_example(true);
  QuerySpec q = parse_query(kTwoHop, c);
  CHECK(q.relations.size() == 5);
  CHECK(q.relations[1] == Relation{"Follows", "F1"});
  CHECK(q.join_preds.size() == 4);
  CHECK(q.join_preds[0] == JoinPredicate{{"P1", "ID"}, {"F1", "ID1"}});
  REQUIRE(q.filter_preds.size() == 1);
  CHECK(q.filter_preds[0].constant == Value{std::string("Karim")});
  CHECK(q.filter_preds[0].type == DataType::Str);
  CHECK(q.projection.size() == 12);  // SELECT * expands user columns only
  CHECK(!q.aggregate);
  CHECK(q.alias_index("P3") == 4);
}

TEST_CASE("statements") {
  Catalog c = oracle::running_example(false);
  auto p = parse("PREDEFINE JOIN Follows(ID1) REFERENCES Person(ID);", c);
  REQUIRE(std::holds_alternative<PredefineJoinStmt>(p));
  CHECK(std::get<PredefineJoinStmt>(p).from_cols == std::vector<std::string>{"ID1"});
  auto r = parse("CREATE RID INDEX ON Follows REFERENCES Person(ID1)", c);
  REQUIRE(std::holds_alternative<CreateRidIndexStmt>(r));
  CHECK(std::get<CreateRidIndexStmt>(r).to_table == "Person");
  auto e = parse("CREATE EXTENDED RID INDEX ON Follows FROM Person(ID1) TO Person(ID2)", c);
  REQUIRE(std::holds_alternative<CreateExtendedRidIndexStmt>(e));
  CHECK(std::get<CreateExtendedRidIndexStmt>(e).far_cols == std::vector<std::string>{"ID2"});
  auto t = parse("CREATE TABLE X (a INTEGER, b VARCHAR, d DATE)", c);
  REQUIRE(std::holds_alternative<CreateTableStmt>(t));
  CHECK(std::get<CreateTableStmt>(t).columns[2].type == DataType::Date);
  auto cp = parse("COPY Person FROM 'a.csv' (HEADER)", c);
  REQUIRE(std::holds_alternative<CopyCsvStmt>(cp));
  CHECK(std::get<CopyCsvStmt>(cp).header);
  auto x = parse("EXPLAIN SELECT COUNT(*) FROM Person p", c);
  REQUIRE(std::holds_alternative<QueryStmt>(x));
  CHECK(std::get<QueryStmt>(x).explain);
}

TEST_CASE("filters normalize literal-first comparisons and dates") {
  Catalog c;
  c.create_table("T", {{"a", DataType::Int64, Visibility::User}, {"d", DataType::Date, Visibility::User}});
  QuerySpec q = parse_query("select min(t.a) from T t where 5 < t.a and t.d >= date '2020-01-02' and t.d < '2021-01-01'", c);
  REQUIRE(q.filter_preds.size() == 3);
  CHECK(q.filter_preds[0].op == CmpOp::Gt);
  CHECK(q.filter_preds[1].constant == Value{std::int64_t{18263}});
  CHECK(q.filter_preds[2].type == DataType::Date);
  REQUIRE(q.aggregate);
  CHECK(q.aggregate->kind == AggKind::Min);
  CHECK(q.aggregate->column == ColumnRef{"t", "a"});
}

TEST_CASE("syntax errors carry position and expectation") {
  Catalog c = oracle::running_example(false);
  try {
    parse("SELECT * FROM Person P WHERE P.ID = ", c);
    FAIL("expected SyntaxError");
  } catch (const SqlSyntaxError& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(e.position() == 36);
    CHECK(!e.expected().empty());
  }
  CHECK(kind_of([&] { parse("SELEC * FROM Person", c); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([&] { parse("SELECT * FROM Person P WHERE P.ID = 'x", c); }) == ErrorKind::SyntaxError);
}

TEST_CASE("unsupported features are named, not mis-parsed") {
  Catalog c = oracle::running_example(false);
  for (const char* sql : {
           "SELECT * FROM Person P WHERE P.ID = 1 OR P.ID = 2",
           "SELECT * FROM Person P WHERE NOT P.ID = 1",
           "SELECT * FROM Person P GROUP BY P.ID",
           "SELECT * FROM Person P ORDER BY P.ID",
           "SELECT * FROM Person P LIMIT 3",
           "SELECT * FROM Person P JOIN Follows F ON P.ID = F.ID1",
           "SELECT * FROM (SELECT * FROM Person) P",
           "SELECT * FROM Person P, Follows F WHERE P.ID < F.ID1",
           "SELECT * FROM Person P WHERE 1 = 1",
           "SELECT P.ID, COUNT(*) FROM Person P",
       }) {
    CAPTURE(sql);
    CHECK(kind_of([&] { parse(sql, c); }) == ErrorKind::UnsupportedFeature);
  }
}

TEST_CASE("resolution errors") {
  Catalog c = oracle::running_example(false);
  for (const char* sql : {
           "SELECT * FROM Nope N",
           "SELECT * FROM Person P, Person P",
           "SELECT Q.ID FROM Person P",
           "SELECT P.zz FROM Person P",
           "SELECT ID FROM Person P1, Person P2",
           "SELECT * FROM Person P WHERE P.name = 3",
           "SELECT * FROM Person P WHERE P.ID = 'x'",
           "SELECT * FROM Person P, Follows F WHERE P.name = F.ID1",
       }) {
    CAPTURE(sql);
    CHECK(kind_of([&] { parse(sql, c); }) == ErrorKind::ResolutionError);
  }
}

TEST_CASE("hidden RID columns are not addressable") {
  Catalog c = oracle::running_example(true);
  CHECK_THROWS_AS(parse("SELECT F.RID(ID1) FROM Follows F", c), Error);
}

TEST_CASE("render round-trips") {
  Catalog c = oracle::running_example(true);
  QuerySpec q = parse_query(kTwoHop, c);
  CHECK(parse_query(render(q), c) == q);
  QuerySpec quoted = parse_query("SELECT COUNT(*) FROM Person P WHERE P.name = 'O''Brien'", c);
  CHECK(parse_query(render(quoted), c) == quoted);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto db = oracle::random_db(seed);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 5; ++i) {
      const std::string sql = oracle::random_query(db, rng);
      CAPTURE(sql);
      QuerySpec rq = parse_query(sql, db.catalog);
      CHECK(parse_query(render(rq), db.catalog) == rq);
    }
  }
}

TEST_CASE("split_script tracks offsets and ignores semicolons in strings") {
  const std::string script = "-- c\nCREATE TABLE A (x VARCHAR);\n\nSELECT * FROM A a WHERE a.x = ';';\n  ;";
  auto parts = split_script(script);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].offset == 5);
  CHECK(script.substr(parts[1].offset, 6) == "SELECT");
  CHECK(parts[1].text.find("';'") != std::string::npos);
}
