#include <doctest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "predjoin/cardinality.hpp"
#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"
#include "predjoin/planner.hpp"

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

Catalog clique(std::size_t n) {
  Catalog c;
  for (std::size_t i = 0; i < n; ++i) {
    Table& t = c.create_table("T" + std::to_string(i), {{"k", DataType::Int64, Visibility::User}});
    for (std::int64_t v = 0; v < 3; ++v) t.append_row({v});
  }
  return c;
}

std::string clique_sql(std::size_t n) {
  std::string sql = "SELECT COUNT(*) FROM ";
  for (std::size_t i = 0; i < n; ++i) sql += (i ? ", T" : "T") + std::to_string(i) + " t" + std::to_string(i);
  std::string where;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      where += (where.empty() ? " WHERE " : " AND ") + ("t" + std::to_string(i)) + ".k = t" + std::to_string(j) + ".k";
  return sql + where;
}

std::set<std::string> kinds(const PlanNode& root) {
  std::set<std::string> out;
  visit(root, [&](const PlanNode& n) { out.insert(to_string(n.kind)); });
  return out;
}

}  // namespace

TEST_CASE("exact cardinality equals nested loops") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto db = oracle::random_db(seed);
    std::mt19937_64 rng(seed * 7 + 1);
    const std::string sql = oracle::random_query(db, rng);
    CAPTURE(sql);
    QuerySpec q = parse_query(sql, db.catalog);
    for (AliasSet s = 1; s <= full_set(q); ++s) {
      if (!is_connected(q, s)) continue;
      std::vector<std::string> aliases;
      for (std::size_t i = 0; i < q.relations.size(); ++i)
        if (s & (AliasSet{1} << i)) aliases.push_back(q.relations[i].alias);
      CHECK(exact_cardinality(db.catalog, q, s) == oracle::bindings(db.catalog, q, aliases).size());
    }
  }
}

TEST_CASE("baseline plan on the running example") {
  Catalog c = oracle::running_example(true);
  QuerySpec q = parse_query(kTwoHop, c);
  CardinalitySource cards(c, q);
  LogicalPlan plan = plan_baseline(c, q, cards);
  CHECK(plan.root.kind == OpKind::Project);
  CHECK(count_kind(plan.root, OpKind::HashJoin) == 4);
  CHECK(count_scans(plan.root) == 5);
  CHECK(kinds(plan.root) == std::set<std::string>{"Project", "HashJoin", "Scan"});
  // Deterministic.
  CardinalitySource again(c, q);
  CHECK(explain(plan_baseline(c, q, again)) == explain(plan));
}

TEST_CASE("rewrite without indices uses SJoin and RID hash joins") {
  Catalog c = oracle::running_example(true);
  QuerySpec q = parse_query(kTwoHop, c);
  CardinalitySource cards(c, q);
  LogicalPlan base = plan_baseline(c, q, cards);
  LogicalPlan rw = rewrite_predefined(c, base, AblationFlags::full());
  CHECK(count_kind(rw.root, OpKind::SJoin) == 2);
  CHECK(count_kind(rw.root, OpKind::HashJoin) == 2);
  CHECK(count_kind(rw.root, OpKind::ScanSJ) == 2);
  CHECK(count_scans(rw.root) == 5);
  LogicalPlan vanilla = rewrite_predefined(c, base, AblationFlags::vanilla());
  CHECK(explain(vanilla) == explain(base));
}

TEST_CASE("indices enable reverse semijoins and merging") {
  Catalog c = oracle::running_example(true);
  build_rid_index(c, c.join(0));
  build_extended_rid_index(c, c.join(0), c.join(1));
  const std::string sql =
      "SELECT P1.name, P2.name, P3.name FROM Person P1, Follows F1, Person P2, Follows F2, Person P3 "
      "WHERE P1.ID = F1.ID1 AND F1.ID2 = P2.ID AND P2.ID = F2.ID1 AND F2.ID2 = P3.ID AND P1.name = 'Karim'";
  QuerySpec q = parse_query(sql, c);
  CardinalitySource cards(c, q);
  LogicalPlan base = plan_baseline(c, q, cards);
  LogicalPlan jm = rewrite_predefined(c, base, AblationFlags::full());
  CHECK(count_kind(jm.root, OpKind::SJoinIdxM) == 2);
  CHECK(count_scans(jm.root) == 3);
  LogicalPlan rsj = rewrite_predefined(c, base, AblationFlags::no_jm());
  CHECK(count_kind(rsj.root, OpKind::SJoinIdxR) == 2);
  CHECK(count_kind(rsj.root, OpKind::SJoin) == 2);
  CHECK(count_kind(rsj.root, OpKind::ScanSJ) == 4);
  LogicalPlan plain = rewrite_predefined(c, base, AblationFlags::no_jm_rsj());
  CHECK(count_kind(plain.root, OpKind::SJoinIdxR) == 0);
  CHECK(count_kind(plain.root, OpKind::SJoin) == 2);
}

TEST_CASE("rewrite never reorders joins") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto db = oracle::random_db(seed);
    std::mt19937_64 rng(seed + 99);
    QuerySpec q = parse_query(oracle::random_query(db, rng), db.catalog);
    for (const auto& plan : enumerate_plans(db.catalog, q, 20)) {
      LogicalPlan rw = rewrite_predefined(db.catalog, plan, AblationFlags::no_jm());
      // Same scan order (left to right) and same join count when nothing merges.
      std::vector<std::string> a, b;
      visit(plan.root, [&](const PlanNode& n) { if (is_scan(n.kind)) a.push_back(n.alias); });
      visit(rw.root, [&](const PlanNode& n) { if (is_scan(n.kind)) b.push_back(n.alias); });
      CHECK(a == b);
    }
  }
}

TEST_CASE("disconnected join graphs are rejected") {
  Catalog c = oracle::running_example(true);
  QuerySpec q = parse_query("SELECT COUNT(*) FROM Person P, Follows F", c);
  CardinalitySource cards(c, q);
  CHECK(kind_of([&] { plan_baseline(c, q, cards); }) == ErrorKind::DisconnectedJoinGraph);
  CHECK(kind_of([&] { enumerate_plans(c, q, 10); }) == ErrorKind::DisconnectedJoinGraph);
}

TEST_CASE("plan enumeration counts") {
  Catalog c = oracle::running_example(true);
  QuerySpec two = parse_query("SELECT COUNT(*) FROM Person P, Follows F WHERE P.ID = F.ID1", c);
  CHECK(enumerate_plans(c, two, 100).size() == 2);
  QuerySpec chain =
      parse_query("SELECT COUNT(*) FROM Person P1, Follows F, Person P2 WHERE P1.ID = F.ID1 AND F.ID2 = P2.ID", c);
  auto plans = enumerate_plans(c, chain, 100);
  CHECK(plans.size() == 8);
  CHECK(count_plans(chain) == 8);
  std::set<std::string> distinct;
  for (const auto& p : plans) distinct.insert(explain(p));
  CHECK(distinct.size() == 8);
  QuerySpec single = parse_query("SELECT COUNT(*) FROM Person P", c);
  CHECK(enumerate_plans(c, single, 5).size() == 1);

  Catalog k = clique(4);
  QuerySpec q4 = parse_query(clique_sql(4), k);
  CHECK(enumerate_plans(k, q4, 10).size() == 10);
  CHECK(count_plans(q4) > 10);
  CHECK(enumerate_plans(k, q4, 100000).size() == count_plans(q4));
}

TEST_CASE("estimates and user cardinality files") {
  Catalog c = oracle::running_example(true);
  QuerySpec q = parse_query(kTwoHop, c);
  CardinalitySource est(c, q, CardinalityMode::IndependenceEstimate);
  for (AliasSet s = 1; s <= full_set(q); ++s) {
    if (!is_connected(q, s)) continue;
    const double v = est.cardinality(s);
    CHECK(v >= 0);
  }
  CHECK(est.key(0b101) == "P1,P2");
  LogicalPlan p = plan_baseline(c, q, est);
  CHECK(count_scans(p.root) == 5);
}
