#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "predjoin/bench.hpp"
#include "predjoin/catalog.hpp"
#include "predjoin/storage.hpp"

using namespace predjoin;

namespace {

std::string dump(const Catalog& c) {
  std::ostringstream out;
  for (const auto& name : c.table_names()) write_csv(c.table(name), out, true);
  return out.str();
}

}  // namespace

TEST_CASE("generator is deterministic per seed") {
  SocialDbConfig cfg{200, 5, 2, 7, 1.2};
  CHECK(dump(generate_social(cfg)) == dump(generate_social(cfg)));
  SocialDbConfig other = cfg;
  other.seed = 8;
  CHECK(dump(generate_social(cfg)) != dump(generate_social(other)));
}

TEST_CASE("empty configuration yields empty tables") {
  Catalog c = generate_social(SocialDbConfig{0, 10, 2, 1, 1.2});
  CHECK(c.table("Person").row_count() == 0);
  CHECK(c.table("Knows").row_count() == 0);
  CHECK(c.table("Comment").row_count() == 0);
  prepare_social_indices(c);
  CHECK(c.predefined_joins().size() == 3);
}

TEST_CASE("Knows replays the sampled degrees, clustered by source") {
  SocialDbConfig cfg{300, 8, 1, 3, 1.2};
  const auto degrees = sample_out_degrees(cfg);
  REQUIRE(degrees.size() == 300);
  Catalog c = generate_social(cfg);
  const Table& p = c.table("Person");
  const Table& k = c.table("Knows");
  const auto ids = p.ints(p.column_index("id"));
  for (std::size_t r = 0; r < ids.size(); ++r) CHECK(ids[r] == person_id(r));
  const auto src = k.ints(k.column_index("id1"));
  const auto dst = k.ints(k.column_index("id2"));
  CHECK(std::is_sorted(src.begin(), src.end()));
  std::vector<std::size_t> seen(300, 0);
  std::set<std::pair<std::int64_t, std::int64_t>> edges;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto rid = static_cast<std::size_t>((src[i] - 1000) / 7);
    ++seen.at(rid);
    CHECK(src[i] != dst[i]);
    CHECK(edges.insert({src[i], dst[i]}).second);
  }
  CHECK(seen == degrees);
  std::size_t total = 0;
  for (auto d : degrees) total += d;
  CHECK(total == src.size());
  // Heavy tail: the largest degree clearly exceeds the mean.
  CHECK(*std::max_element(degrees.begin(), degrees.end()) > 2 * total / degrees.size());
}

TEST_CASE("creation dates are distinct and comments clustered by creator") {
  Catalog c = generate_social(SocialDbConfig{200, 6, 3, 5, 1.2});
  for (const char* table : {"Knows", "Comment"}) {
    const Table& t = c.table(table);
    const auto d = t.ints(t.column_index("creationDate"));
    std::set<std::int64_t> uniq(d.begin(), d.end());
    CHECK(uniq.size() == d.size());
  }
  const Table& cm = c.table("Comment");
  CHECK(cm.row_count() == 600);
  const auto creator = cm.ints(cm.column_index("creatorId"));
  CHECK(std::is_sorted(creator.begin(), creator.end()));
  const auto cid = cm.ints(cm.column_index("id"));
  for (std::size_t i = 0; i < cid.size(); ++i) CHECK(cid[i] == static_cast<std::int64_t>(i + 1));
}

TEST_CASE("indices over the social schema") {
  Catalog c = generate_social(SocialDbConfig{100, 4, 1, 2, 1.2});
  prepare_social_indices(c);
  CHECK(c.rid_indices().size() == 3);
  CHECK(c.extended_indices().size() == 2);
  CHECK(c.table("Knows").frozen());
}

TEST_CASE("quantile thresholds select the requested fraction") {
  std::vector<std::int64_t> v;
  for (std::int64_t i = 0; i < 1000; ++i) v.push_back(i * 3);
  auto below = [&](std::int64_t t) { return std::count_if(v.begin(), v.end(), [&](auto x) { return x < t; }); };
  CHECK(below(quantile_threshold(v, 0.001)) == 1);
  CHECK(below(quantile_threshold(v, 0.0001)) == 1);
  CHECK(below(quantile_threshold(v, 0.1)) == 100);
  CHECK(below(quantile_threshold(v, 1.0)) == 1000);
}

TEST_CASE("small benchmarks run and agree across modes") {
  Catalog c = generate_social(SocialDbConfig{400, 6, 2, 11, 1.2});
  prepare_social_indices(c);
  BenchOptions opt{64, 1, 0};
  auto rows = run_micro(MicroSpec{MicroKind::P, 0.999, {0.01, 1.0}}, c, opt);
  CHECK(rows.size() == 4);
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) CHECK(rows[i].result_count == rows[i + 1].result_count);
  CHECK(micro_csv(rows).find("selectivity") == 0);
  auto suite = social_suite(c);
  CHECK(suite.size() == 10);
  auto ab = run_ablation(suite, c, opt);
  CHECK(ab.size() == 40);
  CHECK(plot_ablation(ab).find("<svg") != std::string::npos);
  auto spec = spectrum_suite(c);
  CHECK(spec.size() == 3);
  auto rep = run_spectrum(spec[0].sql, c, 12, opt);
  CHECK(rep.baseline_within_best >= 1);
  CHECK(!rep.cdf.empty());
  CHECK(spectrum_csv(rep).find("plan_id") != std::string::npos);
}
