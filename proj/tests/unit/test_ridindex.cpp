#include <doctest.h>

#include <algorithm>

#include "oracle.hpp"
#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"
#include "predjoin/ridindex.hpp"

using namespace predjoin;

namespace {

std::vector<Rid> vec(std::span<const Rid> s) { return {s.begin(), s.end()}; }
std::vector<RidPair> vec(std::span<const RidPair> s) { return {s.begin(), s.end()}; }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("RID index on the running example") {
  Catalog c = oracle::running_example(true);
  const auto& r1 = build_rid_index(c, c.join(0));
  CHECK(r1.offsets() == std::vector<std::int64_t>{0, 3, 4, 5, 5});
  CHECK(r1.values() == std::vector<Rid>{0, 2, 4, 3, 1});
  CHECK(vec(r1.neighbors(1)) == std::vector<Rid>{3});
  CHECK(vec(r1.neighbors(3)).empty());
  CHECK(kind_of([&] { r1.neighbors(7); }) == ErrorKind::RidOutOfRange);
  const auto& r2 = build_rid_index(c, c.join(1));
  CHECK(r2.offsets() == std::vector<std::int64_t>{0, 0, 1, 3, 5});
  CHECK(r2.values() == std::vector<Rid>{0, 2, 3, 1, 4});
  CHECK(kind_of([&] { build_rid_index(c, c.join(0)); }) == ErrorKind::AlreadyIndexed);
  CHECK(c.find_rid_index(0) == &r1);
}

TEST_CASE("extended RID index on the running example") {
  Catalog c = oracle::running_example(true);
  const auto& fwd = build_extended_rid_index(c, c.join(0), c.join(1));
  CHECK(vec(fwd.extended_neighbors(0)) == std::vector<RidPair>{{0, 1}, {2, 2}, {4, 3}});
  CHECK(vec(fwd.extended_neighbors(1)) == std::vector<RidPair>{{3, 2}});
  CHECK(vec(fwd.extended_neighbors(2)) == std::vector<RidPair>{{1, 3}});
  CHECK(vec(fwd.extended_neighbors(3)).empty());
  CHECK(kind_of([&] { fwd.extended_neighbors(4); }) == ErrorKind::RidOutOfRange);
  const auto& bwd = build_extended_rid_index(c, c.join(1), c.join(0));
  // Rows with R2 = 2 are Follows RIDs 2 and 3; their R1 values are 0 and 1.
  CHECK(vec(bwd.extended_neighbors(2)) == std::vector<RidPair>{{2, 0}, {3, 1}});
  CHECK(kind_of([&] { build_extended_rid_index(c, c.join(0), c.join(1)); }) == ErrorKind::AlreadyIndexed);
  CHECK(c.find_extended_index(0, 1) == &fwd);
  CHECK(c.find_extended_index(1, 0) == &bwd);
}

TEST_CASE("extended index needs joins on one table") {
  Catalog c = oracle::running_example(true);
  c.create_table("E", {{"p", DataType::Int64, Visibility::User}});
  const auto& e = predefine_join(c, "E", {"p"}, "Person", {"ID"});
  CHECK(kind_of([&] { build_extended_rid_index(c, c.join(0), e); }) == ErrorKind::JoinsOnDifferentTables);
  const auto& idx = build_rid_index(c, e);
  CHECK(idx.offsets() == std::vector<std::int64_t>{0, 0, 0, 0, 0});
  CHECK(idx.values().empty());
}

TEST_CASE("CSR invariants against brute-force grouping") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto db = oracle::random_db(seed);
    for (const auto& idx : db.catalog.rid_indices()) {
      const auto& j = db.catalog.join(idx.join_id());
      const auto col = oracle::rid_column(db.catalog, j.from_table, j.from_cols, j.to_table, j.to_cols);
      const auto& off = idx.offsets();
      REQUIRE(off.size() == db.catalog.table(j.to_table).row_count() + 1);
      CHECK(off.front() == 0);
      CHECK(std::is_sorted(off.begin(), off.end()));
      CHECK(off.back() == static_cast<std::int64_t>(col.size()));
      auto flat = idx.values();
      std::sort(flat.begin(), flat.end());
      for (std::size_t i = 0; i < flat.size(); ++i) CHECK(flat[i] == static_cast<Rid>(i));
      for (std::size_t p = 0; p + 1 < off.size(); ++p) {
        std::vector<Rid> expect;
        for (std::size_t f = 0; f < col.size(); ++f)
          if (col[f] == static_cast<Rid>(p)) expect.push_back(static_cast<Rid>(f));
        CHECK(vec(idx.neighbors(static_cast<Rid>(p))) == expect);
      }
    }
    for (const auto& idx : db.catalog.extended_indices()) {
      const auto& n = db.catalog.join(idx.near_join_id());
      const auto& f = db.catalog.join(idx.far_join_id());
      const auto near = oracle::rid_column(db.catalog, n.from_table, n.from_cols, n.to_table, n.to_cols);
      const auto far = oracle::rid_column(db.catalog, f.from_table, f.from_cols, f.to_table, f.to_cols);
      CHECK(idx.entry_count() == near.size());
      for (std::size_t p = 0; p < idx.key_count(); ++p) {
        std::vector<RidPair> expect;
        for (std::size_t r = 0; r < near.size(); ++r)
          if (near[r] == static_cast<Rid>(p)) expect.push_back({static_cast<Rid>(r), far[r]});
        CHECK(vec(idx.extended_neighbors(static_cast<Rid>(p))) == expect);
      }
    }
  }
}
