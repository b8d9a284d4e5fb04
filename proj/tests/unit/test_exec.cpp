#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"
#include "predjoin/exec.hpp"
#include "predjoin/planner.hpp"
#include "predjoin/sip.hpp"

using namespace predjoin;

namespace {

const char* kTwoHopStar =
    "SELECT * FROM Person P1, Follows F1, Person P2, Follows F2, Person P3 "
    "WHERE P1.ID = F1.ID1 AND F1.ID2 = P2.ID AND P2.ID = F2.ID1 AND F2.ID2 = P3.ID AND P1.name = '";
const char* kTwoHopNames =
    "SELECT P1.name, P2.name, P3.name FROM Person P1, Follows F1, Person P2, Follows F2, Person P3 "
    "WHERE P1.ID = F1.ID1 AND F1.ID2 = P2.ID AND P2.ID = F2.ID1 AND F2.ID2 = P3.ID AND P1.name = '";

Bitset bits(const std::string& s) {
  Bitset b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '1') b.set(i);
  return b;
}

struct Run {
  LogicalPlan plan;
  QueryResult result;
};

Run run(const Catalog& c, const std::string& sql, const AblationFlags& flags, std::size_t zone_size) {
  QuerySpec q = parse_query(sql, c);
  CardinalitySource cards(c, q);
  LogicalPlan plan = rewrite_predefined(c, plan_baseline(c, q, cards), flags);
  QueryResult r = execute(plan, c, ZoneConfig{zone_size}, ExecOptions{true});
  return {std::move(plan), std::move(r)};
}

const OperatorStats& scan_of(const QueryResult& r, const std::string& alias) {
  for (const auto& op : r.stats.operators)
    if (is_scan(op.kind) && op.alias == alias) return op;
  FAIL("no scan for " << alias);
  return r.stats.operators.front();
}

Catalog indexed_example() {
  Catalog c = oracle::running_example(true);
  build_rid_index(c, c.join(0));
  build_extended_rid_index(c, c.join(0), c.join(1));
  return c;
}

}  // namespace

TEST_CASE("build_sip_filters sets rows and zones by direct indexing") {
  const std::vector<Rid> rids{2, 2, 5};
  SipFilter f = build_sip_filters(rids, 7, 2);
  CHECK(f.row_bits == bits("0010010"));
  CHECK(f.zone_bits == bits("0110"));
  SipFilter empty = build_sip_filters({}, 4, 2);
  CHECK(empty.row_bits == bits("0000"));
  CHECK(empty.zone_bits == bits("00"));
  const std::vector<Rid> bad{4};
  CHECK_THROWS_AS(build_sip_filters(bad, 4, 2), Error);
}

TEST_CASE("reverse filters follow the RID index") {
  Catalog c = indexed_example();
  const RidIndex& idx = *c.find_rid_index(0);
  const std::vector<Rid> karim{1};
  SipFilter f = build_reverse_sip_filters(karim, idx, 2);
  CHECK(f.row_bits == bits("00010"));
  CHECK(f.zone_bits == bits("010"));
  const std::vector<Rid> both{0, 2};
  CHECK(build_reverse_sip_filters(both, idx, 2).row_bits == bits("11101"));
}

TEST_CASE("merged build expands extended index pairs") {
  Catalog c = indexed_example();
  const ExtendedRidIndex& ext = *c.find_extended_index(0, 1);
  const std::vector<Rid> near{0, 3, 2};
  MergedBuild m = expand_merged_build(near, ext, 4, 2);
  CHECK(m.build_row == std::vector<std::uint32_t>{0, 0, 0, 2});
  CHECK(m.far_rid == std::vector<Rid>{1, 2, 3, 3});
  CHECK(m.filter.row_bits == bits("0111"));
  CHECK(m.filter.zone_bits == bits("11"));
}

TEST_CASE("intersect ANDs rows and re-derives zones") {
  SipFilter a{"x", bits("11"), bits("1101")};
  SipFilter b{"x", bits("11"), bits("0111")};
  std::vector<SipFilter> both{a, b};
  SipFilter i = intersect(both, 2);
  CHECK(i.row_bits == bits("0101"));
  CHECK(i.zone_bits == bits("11"));
  SipFilter d{"x", bits("01"), bits("0011")};
  std::vector<SipFilter> ad{a, d};
  CHECK(intersect(ad, 2).zone_bits == bits("01"));
}

TEST_CASE("running example bitmasks at zone size 2") {
  Catalog c = oracle::running_example(true);
  Run r = run(c, std::string(kTwoHopStar) + "Karim'", AblationFlags::full(), 2);
  const auto& p2 = scan_of(r.result, "P2");
  const auto& p3 = scan_of(r.result, "P3");
  REQUIRE(p2.combined_filter);
  REQUIRE(p3.combined_filter);
  CHECK(p2.kind == OpKind::ScanSJ);
  CHECK(p2.combined_filter->zone_bits == bits("01"));
  CHECK(p2.combined_filter->row_bits == bits("0010"));
  CHECK(p3.combined_filter->zone_bits == bits("01"));
  CHECK(p3.combined_filter->row_bits == bits("0001"));
  CHECK(p2.zones_visited == 1);
  CHECK(p2.tuples_materialized == 2);
  CHECK(p2.tuples_emitted == 1);
  REQUIRE(r.result.rows.size() == 1);
  const std::vector<Value> expect{std::int64_t{202}, std::string("Karim"), std::int64_t{202}, std::int64_t{303},
                                  std::int64_t{2020}, std::int64_t{303}, std::string("Carmen"), std::int64_t{303},
                                  std::int64_t{404}, std::int64_t{2019}, std::int64_t{404}, std::string("Zhang")};
  CHECK(r.result.rows[0] == expect);
  CHECK(r.result.column_names.front() == "P1.ID");
}

TEST_CASE("reverse semijoin targets the relationship table") {
  Catalog c = indexed_example();
  Run r = run(c, std::string(kTwoHopNames) + "Karim'", AblationFlags::no_jm(), 2);
  const auto& f1 = scan_of(r.result, "F1");
  CHECK(f1.kind == OpKind::ScanSJ);
  REQUIRE(f1.combined_filter);
  CHECK(f1.combined_filter->row_bits.set_positions() == std::vector<std::size_t>{3});
  CHECK(f1.combined_filter->zone_bits.set_positions() == std::vector<std::size_t>{1});
  CHECK(r.result.rows == std::vector<std::vector<Value>>{
                             {std::string("Karim"), std::string("Carmen"), std::string("Zhang")}});
  Run m = run(c, std::string(kTwoHopNames) + "Karim'", AblationFlags::full(), 2);
  CHECK(m.result.rows == r.result.rows);
  CHECK(m.result.stats.scan_operators() == 3);
  CHECK(m.result.stats.tuples_materialized() < r.result.stats.tuples_materialized());
}

TEST_CASE("an all-zero filter skips every zone") {
  Catalog c = indexed_example();
  for (auto flags : {AblationFlags::full(), AblationFlags::no_jm(), AblationFlags::no_jm_rsj()}) {
    Run r = run(c, std::string(kTwoHopNames) + "Nobody'", flags, 2);
    CHECK(r.result.rows.empty());
    for (const auto& op : r.result.stats.operators) {
      if (op.kind != OpKind::ScanSJ) continue;
      CHECK(op.zones_visited == 0);
      CHECK(op.tuples_materialized == 0);
      CHECK(op.tuples_emitted == 0);
    }
  }
}

TEST_CASE("aggregates over empty and non-empty inputs") {
  Catalog c = oracle::running_example(true);
  auto count = run(c, "SELECT COUNT(*) FROM Person P, Follows F WHERE P.ID = F.ID1 AND P.name = 'Nobody'",
                   AblationFlags::full(), 2);
  CHECK(count.result.rows == std::vector<std::vector<Value>>{{std::int64_t{0}}});
  CHECK(count.result.column_names == std::vector<std::string>{"COUNT(*)"});
  auto mn = run(c, "SELECT MIN(F.year) FROM Person P, Follows F WHERE P.ID = F.ID1 AND P.name = 'Nobody'",
                AblationFlags::full(), 2);
  CHECK(mn.result.rows.empty());
  auto mx = run(c, "SELECT MAX(F.year) FROM Person P, Follows F WHERE P.ID = F.ID1", AblationFlags::full(), 2);
  CHECK(mx.result.rows == std::vector<std::vector<Value>>{{std::int64_t{2021}}});
}

TEST_CASE("execution matches nested loops on random databases") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto db = oracle::random_db(seed);
    std::mt19937_64 rng(seed ^ 0xabc);
    const std::string sql = oracle::random_query(db, rng);
    CAPTURE(sql);
    QuerySpec q = parse_query(sql, db.catalog);
    const auto expect = oracle::sorted(oracle::evaluate(db.catalog, q));
    for (const auto& plan : enumerate_plans(db.catalog, q, 16)) {
      for (auto flags : {AblationFlags::full(), AblationFlags::no_jm(), AblationFlags::no_jm_rsj(),
                         AblationFlags::vanilla()}) {
        LogicalPlan rw = rewrite_predefined(db.catalog, plan, flags);
        for (std::size_t zs : {1, 7}) {
          auto got = execute(rw, db.catalog, ZoneConfig{zs});
          CHECK(oracle::sorted(oracle::rows_of(got)) == expect);
        }
      }
    }
  }
}

TEST_CASE("stats JSON and CSV rendering") {
  Catalog c = oracle::running_example(true);
  Run r = run(c, std::string(kTwoHopNames) + "Karim'", AblationFlags::full(), 2);
  const std::string js = r.result.stats.to_json();
  CHECK(js.find("\"ScanSJ\"") != std::string::npos);
  CHECK(js.find("zones_visited") != std::string::npos);
  CHECK(r.result.to_csv() == "P1.name,P2.name,P3.name\nKarim,Carmen,Zhang\n");
}
