#include "predjoin/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "predjoin/error.hpp"
#include "predjoin/sql.hpp"

namespace predjoin {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection keeps the draw unbiased and independent of the standard library's distributions.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

constexpr std::int64_t kDateBase = 10957;  // 2000-01-01
constexpr std::int64_t kMinDateSpan = 7305;  // twenty years
const char* const kCountries[] = {"Argentina", "Brazil", "Chile", "China", "Egypt",
                                  "France", "India", "Japan", "Kenya", "Turkey"};

// Truncated power law over degrees 1..floor(c) with a fractional weight for floor(c)+1.
std::vector<double> degree_weights(double s, double c) {
  const auto whole = static_cast<std::size_t>(std::floor(c));
  std::vector<double> w(whole + 2, 0.0);
  for (std::size_t d = 1; d <= whole; ++d) w[d] = std::pow(static_cast<double>(d), -s);
  w[whole + 1] = (c - static_cast<double>(whole)) * std::pow(static_cast<double>(whole + 1), -s);
  return w;
}

double weights_mean(const std::vector<double>& w) {
  double num = 0, den = 0;
  for (std::size_t d = 0; d < w.size(); ++d) {
    num += static_cast<double>(d) * w[d];
    den += w[d];
  }
  return num / den;
}

// Distinct values of [0, span) in random order, `count` of them.
std::vector<std::int64_t> distinct_offsets(std::mt19937_64& rng, std::size_t count, std::size_t span) {
  std::vector<std::int64_t> pool(span);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + uniform_below(rng, span - i)]);
  pool.resize(count);
  return pool;
}

std::vector<std::int64_t> distinct_dates(std::mt19937_64& rng, std::size_t count) {
  auto v = distinct_offsets(rng, count, std::max<std::size_t>(count, kMinDateSpan));
  for (auto& d : v) d += kDateBase;
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0;
  return v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

std::string date_literal(std::int64_t days) { return "DATE '" + format_date(days) + "'"; }

std::vector<std::int64_t> int_column(const Catalog& catalog, const std::string& table, const std::string& col) {
  const Table& t = catalog.table(table);
  const auto span = t.ints(t.column_index(col));
  return {span.begin(), span.end()};
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> sample_out_degrees(const SocialDbConfig& config) {
  std::vector<std::size_t> degrees(config.n_person, 0);
  if (config.n_person < 2 || config.avg_degree <= 0) return degrees;
  std::mt19937_64 rng(config.seed);
  const double cap = static_cast<double>(config.n_person - 1);
  if (config.avg_degree < 1) {
    for (auto& d : degrees) d = uniform_unit(rng) < config.avg_degree ? 1 : 0;
    return degrees;
  }
  double lo = 1, hi = cap;
  if (weights_mean(degree_weights(config.zipf_exponent, hi)) <= config.avg_degree) {
    lo = hi;
  } else {
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = (lo + hi) / 2;
      (weights_mean(degree_weights(config.zipf_exponent, mid)) < config.avg_degree ? lo : hi) = mid;
    }
  }
  const auto w = degree_weights(config.zipf_exponent, lo);
  std::vector<double> cdf(w.size());
  std::partial_sum(w.begin(), w.end(), cdf.begin());
  for (auto& d : degrees) {
    const double u = uniform_unit(rng) * cdf.back();
    d = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    d = std::clamp<std::size_t>(d, 1, config.n_person - 1);
  }
  return degrees;
}

Catalog generate_social(const SocialDbConfig& config) {
  Catalog catalog;
  Table& person = catalog.create_table("Person", {{"id", DataType::Int64, Visibility::User},
                                                  {"name", DataType::Str, Visibility::User},
                                                  {"country", DataType::Str, Visibility::User}});
  Table& knows = catalog.create_table("Knows", {{"id1", DataType::Int64, Visibility::User},
                                                {"id2", DataType::Int64, Visibility::User},
                                                {"creationDate", DataType::Date, Visibility::User}});
  Table& comment = catalog.create_table("Comment", {{"id", DataType::Int64, Visibility::User},
                                                    {"creatorId", DataType::Int64, Visibility::User},
                                                    {"creationDate", DataType::Date, Visibility::User},
                                                    {"content", DataType::Str, Visibility::User}});
  const std::size_t n = config.n_person;
  const auto degrees = sample_out_degrees(config);
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  for (std::size_t i = 0; i < n; ++i)
    person.append_row({person_id(i), "person" + std::to_string(i), std::string(kCountries[uniform_below(rng, 10)])});

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> targets;
    if (degrees[i] * 2 > n) {
      for (auto off : distinct_offsets(rng, degrees[i], n - 1))
        targets.push_back(static_cast<std::size_t>(off) + (static_cast<std::size_t>(off) >= i));
    } else {
      std::unordered_set<std::size_t> seen;
      while (targets.size() < degrees[i]) {
        const auto t = static_cast<std::size_t>(uniform_below(rng, n));
        if (t != i && seen.insert(t).second) targets.push_back(t);
      }
    }
    std::sort(targets.begin(), targets.end());
    for (auto t : targets) edges.emplace_back(i, t);
  }
  const auto knows_dates = distinct_dates(rng, edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    knows.append_row({person_id(edges[e].first), person_id(edges[e].second), knows_dates[e]});

  const std::size_t n_comment = n * config.n_comment_per_person;
  const auto comment_dates = distinct_dates(rng, n_comment);
  for (std::size_t c = 0; c < n_comment; ++c) {
    const std::size_t creator = c / config.n_comment_per_person;
    comment.append_row({static_cast<std::int64_t>(c + 1), person_id(creator), comment_dates[c],
                        "comment" + std::to_string(c + 1)});
  }
  return catalog;
}

void prepare_social_indices(Catalog& catalog) {
  const auto& k1 = predefine_join(catalog, "Knows", {"id1"}, "Person", {"id"});
  const auto& k2 = predefine_join(catalog, "Knows", {"id2"}, "Person", {"id"});
  const auto& c = predefine_join(catalog, "Comment", {"creatorId"}, "Person", {"id"});
  build_rid_index(catalog, k1);
  build_rid_index(catalog, k2);
  build_rid_index(catalog, c);
  build_extended_rid_index(catalog, k1, k2);
  build_extended_rid_index(catalog, k2, k1);
}

void dump_social(const Catalog& catalog, const std::string& dir, bool with_indices) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream sql;
  for (const auto& name : catalog.table_names()) {
    const Table& t = catalog.table(name);
    sql << "CREATE TABLE " << name << " (";
    bool first = true;
    for (const auto& c : t.columns()) {
      if (c.visibility != Visibility::User) continue;
      sql << (first ? "" : ", ") << c.name << ' '
          << (c.type == DataType::Str ? "VARCHAR" : c.type == DataType::Date ? "DATE" : "BIGINT");
      first = false;
    }
    sql << ");\n";
  }
  for (const auto& name : catalog.table_names()) {
    std::ofstream out(fs::path(dir) / (name + ".csv"), std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot write " + (fs::path(dir) / (name + ".csv")).string());
    write_csv(catalog.table(name), out, true);
    sql << "COPY " << name << " FROM '" << name << ".csv' (HEADER);\n";
  }
  if (with_indices) {
    sql << "PREDEFINE JOIN Knows(id1) REFERENCES Person(id);\n"
           "PREDEFINE JOIN Knows(id2) REFERENCES Person(id);\n"
           "PREDEFINE JOIN Comment(creatorId) REFERENCES Person(id);\n"
           "CREATE RID INDEX ON Knows REFERENCES Person(id1);\n"
           "CREATE RID INDEX ON Knows REFERENCES Person(id2);\n"
           "CREATE RID INDEX ON Comment REFERENCES Person(creatorId);\n"
           "CREATE EXTENDED RID INDEX ON Knows FROM Person(id1) TO Person(id2);\n"
           "CREATE EXTENDED RID INDEX ON Knows FROM Person(id2) TO Person(id1);\n";
  }
  std::ofstream out(fs::path(dir) / "load.sql", std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write " + (fs::path(dir) / "load.sql").string());
  out << sql.str();
}

QueryResult timed_execute(const LogicalPlan& plan, const Catalog& catalog, const BenchOptions& options) {
  const ZoneConfig zones{options.zone_size};
  for (std::size_t i = 0; i < options.warmup; ++i) execute(plan, catalog, zones);
  std::vector<double> times;
  QueryResult last;
  for (std::size_t i = 0; i < std::max<std::size_t>(1, options.repetitions); ++i) {
    last = execute(plan, catalog, zones);
    times.push_back(last.stats.wall_ms);
  }
  last.stats.wall_ms = median(times);
  return last;
}

bool same_multiset(const QueryResult& a, const QueryResult& b) {
  if (a.column_types != b.column_types || a.rows.size() != b.rows.size()) return false;
  auto x = a.rows;
  auto y = b.rows;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

std::int64_t quantile_threshold(std::vector<std::int64_t> values, double selectivity) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(selectivity * static_cast<double>(n))), 1, n);
  return k == n ? values.back() + 1 : values[k];
}

std::vector<MicroRow> run_micro(const MicroSpec& spec, const Catalog& catalog, const BenchOptions& options) {
  const auto ids = int_column(catalog, "Person", "id");
  const auto dates = int_column(catalog, "Knows", "creationDate");
  std::vector<MicroRow> rows;
  for (double sel : spec.swept) {
    if (!(sel > 0 && sel <= 1)) fail(ErrorKind::ResolutionError, "selectivity must be in (0, 1]");
    const double person_sel = spec.which == MicroKind::P ? sel : spec.fixed_selectivity;
    const double knows_sel = spec.which == MicroKind::P ? spec.fixed_selectivity : sel;
    const std::string sql =
        "SELECT COUNT(*) FROM Person p1, Knows k, Person p2 WHERE p1.id = k.id1 AND k.id2 = p2.id AND p1.id < " +
        std::to_string(quantile_threshold(ids, person_sel)) + " AND k.creationDate < " +
        date_literal(quantile_threshold(dates, knows_sel));
    const QuerySpec q = parse_query(sql, catalog);
    CardinalitySource cards(catalog, q);
    const LogicalPlan vanilla = plan_baseline(catalog, q, cards);
    const LogicalPlan predefined = rewrite_predefined(catalog, vanilla, AblationFlags::full());
    const QueryResult rv = timed_execute(vanilla, catalog, options);
    const QueryResult rp = timed_execute(predefined, catalog, options);
    if (!same_multiset(rv, rp)) fail(ErrorKind::Internal, "micro benchmark results differ at selectivity " + fmt(sel));
    for (const auto* r : {&rv, &rp}) {
      MicroRow row;
      row.selectivity = sel;
      row.mode = r == &rv ? "vanilla" : "predefined";
      row.wall_ms = r->stats.wall_ms;
      row.knows_tuples_materialized = r->stats.tuples_materialized_of_table("Knows");
      row.person_tuples_materialized = r->stats.tuples_materialized_of_table("Person");
      row.total_tuples_materialized = r->stats.tuples_materialized();
      row.result_count = std::get<std::int64_t>(r->rows.at(0).at(0));
      rows.push_back(row);
    }
  }
  return rows;
}

std::string micro_csv(const std::vector<MicroRow>& rows) {
  std::ostringstream out;
  out << "selectivity,mode,wall_ms,knows_tuples_materialized,person_tuples_materialized,total_tuples_materialized,"
         "result_count\n";
  for (const auto& r : rows)
    out << fmt(r.selectivity) << ',' << r.mode << ',' << fmt(r.wall_ms) << ',' << r.knows_tuples_materialized << ','
        << r.person_tuples_materialized << ',' << r.total_tuples_materialized << ',' << r.result_count << '\n';
  return out.str();
}

std::vector<SuiteQuery> social_suite(const Catalog& catalog) {
  const auto ids = int_column(catalog, "Person", "id");
  const auto kdates = int_column(catalog, "Knows", "creationDate");
  const auto cids = int_column(catalog, "Comment", "id");
  if (ids.empty()) fail(ErrorKind::ResolutionError, "social suite needs a non-empty Person table");
  const std::size_t n = ids.size();
  auto pid = [&](double s) { return std::to_string(quantile_threshold(ids, s)); };
  const std::string hop1 = "p1.id = k.id1 AND k.id2 = p2.id";
  const std::string hop2 = "p1.id = k1.id1 AND k1.id2 = p2.id AND p2.id = k2.id1 AND k2.id2 = p3.id";
  return {
      {"q01_1hop_count", "SELECT COUNT(*) FROM Person p1, Knows k, Person p2 WHERE " + hop1 + " AND p1.id < " + pid(0.01)},
      {"q02_2hop_names", "SELECT p3.name FROM Person p1, Knows k1, Person p2, Knows k2, Person p3 WHERE " + hop2 +
                             " AND p1.id = " + std::to_string(person_id(n / 2))},
      {"q03_3hop_count",
       "SELECT COUNT(*) FROM Person p1, Knows k1, Person p2, Knows k2, Person p3, Knows k3, Person p4 WHERE " + hop2 +
           " AND p3.id = k3.id1 AND k3.id2 = p4.id AND p1.id < " + pid(0.002)},
      {"q04_2hop_both_ends", "SELECT p1.name, p3.name FROM Person p1, Knows k1, Person p2, Knows k2, Person p3 WHERE " +
                                 hop2 + " AND p1.id < " + pid(0.01) + " AND p3.country = 'Chile'"},
      {"q05_1hop_edge_dates", "SELECT p2.name, k.creationDate FROM Person p1, Knows k, Person p2 WHERE " + hop1 +
                                  " AND p1.id < " + pid(0.01)},
      {"q06_comment_creators", "SELECT COUNT(*) FROM Comment c, Person p WHERE c.creatorId = p.id AND c.id < " +
                                   std::to_string(quantile_threshold(cids, 0.01))},
      {"q07_friend_comments", "SELECT c.content FROM Person p1, Knows k, Person p2, Comment c WHERE " + hop1 +
                                  " AND c.creatorId = p2.id AND p1.id = " + std::to_string(person_id(n / 3))},
      {"q08_followers", "SELECT p1.name FROM Person p1, Knows k, Person p2 WHERE " + hop1 + " AND p2.id < " + pid(0.005)},
      {"q09_min_comment_date", "SELECT MIN(c.creationDate) FROM Person p1, Knows k, Person p2, Comment c WHERE " +
                                   hop1 + " AND c.creatorId = p2.id AND p1.id < " + pid(0.01)},
      {"q10_recent_2hop", "SELECT COUNT(*) FROM Person p1, Knows k1, Person p2, Knows k2, Person p3 WHERE " + hop2 +
                              " AND k1.creationDate < " + date_literal(quantile_threshold(kdates, 0.05)) +
                              " AND p1.country = 'Japan'"},
  };
}

std::vector<AblationConfig> ablation_configs() {
  return {{"GR-FULL", AblationFlags::full()},
          {"GR-JM", AblationFlags::no_jm()},
          {"GR-JM-RSJ", AblationFlags::no_jm_rsj()},
          {"vanilla", AblationFlags::vanilla()}};
}

std::vector<AblationRow> run_ablation(const std::vector<SuiteQuery>& suite, const Catalog& catalog,
                                      const BenchOptions& options) {
  std::vector<AblationRow> rows;
  for (const auto& sq : suite) {
    const QuerySpec q = parse_query(sq.sql, catalog);
    CardinalitySource cards(catalog, q);
    const LogicalPlan baseline = plan_baseline(catalog, q, cards);
    const QueryResult reference = execute(baseline, catalog, ZoneConfig{options.zone_size});
    for (const auto& cfg : ablation_configs()) {
      const LogicalPlan plan = rewrite_predefined(catalog, baseline, cfg.flags);
      const QueryResult r = timed_execute(plan, catalog, options);
      if (!same_multiset(reference, r)) fail(ErrorKind::Internal, sq.name + ": " + cfg.name + " result differs from vanilla");
      rows.push_back({sq.name, cfg.name, r.stats.wall_ms, r.stats.tuples_materialized(), count_scans(plan.root)});
    }
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "query,config,wall_ms,tuples_materialized,scan_operators\n";
  for (const auto& r : rows)
    out << r.query << ',' << r.config << ',' << fmt(r.wall_ms) << ',' << r.tuples_materialized << ','
        << r.scan_operators << '\n';
  return out.str();
}

SpectrumReport run_spectrum(const std::string& sql, const Catalog& catalog, std::size_t cap,
                            const BenchOptions& options, std::vector<double> thresholds) {
  SpectrumReport report;
  report.query = sql;
  const QuerySpec q = parse_query(sql, catalog);
  const auto plans = enumerate_plans(catalog, q, cap);
  std::optional<QueryResult> reference;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const LogicalPlan rewritten = rewrite_predefined(catalog, plans[i], AblationFlags::full());
    const QueryResult rb = timed_execute(plans[i], catalog, options);
    const QueryResult rr = timed_execute(rewritten, catalog, options);
    if (!reference) reference = rb;
    if (!same_multiset(*reference, rb) || !same_multiset(*reference, rr))
      fail(ErrorKind::Internal, "spectrum plan " + std::to_string(i) + " result differs");
    report.plans.push_back({i, "baseline", rb.stats.wall_ms, rb.stats.tuples_materialized()});
    report.plans.push_back({i, "rewritten", rr.stats.wall_ms, rr.stats.tuples_materialized()});
  }
  if (report.plans.empty()) return report;

  report.best_baseline_tuples = std::numeric_limits<std::uint64_t>::max();
  for (const auto& p : report.plans)
    if (p.variant == "baseline") report.best_baseline_tuples = std::min(report.best_baseline_tuples, p.tuples_materialized);
  for (const auto& p : report.plans) {
    if (p.tuples_materialized > report.best_baseline_tuples) continue;
    ++(p.variant == "baseline" ? report.baseline_within_best : report.rewritten_within_best);
  }

  if (thresholds.empty()) {
    double lo = std::numeric_limits<double>::max(), hi = 0;
    for (const auto& p : report.plans) {
      lo = std::min(lo, p.wall_ms);
      hi = std::max(hi, p.wall_ms);
    }
    lo = std::max(lo, 1e-3);
    hi = std::max(hi, lo * 1.0001);
    const int steps = 12;
    for (int s = 0; s < steps; ++s)
      thresholds.push_back(lo * std::pow(hi / lo, static_cast<double>(s) / (steps - 1)));
  }
  std::sort(thresholds.begin(), thresholds.end());
  for (double t : thresholds) {
    CdfRow row{t, 0, 0};
    for (const auto& p : report.plans)
      if (p.wall_ms <= t) ++(p.variant == "baseline" ? row.baseline : row.rewritten);
    report.cdf.push_back(row);
  }
  return report;
}

std::string spectrum_csv(const SpectrumReport& report) {
  std::ostringstream out;
  out << "plan_id,variant,wall_ms,tuples_materialized\n";
  for (const auto& p : report.plans)
    out << p.plan_id << ',' << p.variant << ',' << fmt(p.wall_ms) << ',' << p.tuples_materialized << '\n';
  out << "\nthreshold_ms,baseline_plans,rewritten_plans\n";
  for (const auto& c : report.cdf) out << fmt(c.threshold) << ',' << c.baseline << ',' << c.rewritten << '\n';
  out << "\nbest_baseline_tuples,baseline_within_best,rewritten_within_best\n"
      << report.best_baseline_tuples << ',' << report.baseline_within_best << ',' << report.rewritten_within_best
      << '\n';
  return out.str();
}

std::vector<SuiteQuery> spectrum_suite(const Catalog& catalog) {
  const auto cids = int_column(catalog, "Comment", "id");
  const std::size_t n = catalog.table("Person").row_count();
  if (n == 0 || cids.empty()) fail(ErrorKind::ResolutionError, "spectrum suite needs people and comments");
  return {
      {"s1_2hop_edges", "SELECT COUNT(*) FROM Person p1, Knows k1, Person p2, Knows k2 WHERE p1.id = k1.id1 AND "
                        "k1.id2 = p2.id AND p2.id = k2.id1 AND p1.id = " + std::to_string(person_id(n / 2))},
      {"s2_friend_comments", "SELECT COUNT(*) FROM Person p1, Knows k, Person p2, Comment c WHERE p1.id = k.id1 AND "
                             "k.id2 = p2.id AND c.creatorId = p2.id AND p1.id = " + std::to_string(person_id(n / 4))},
      {"s3_commenter_friends", "SELECT COUNT(*) FROM Comment c, Person p1, Knows k, Person p2 WHERE c.creatorId = "
                               "p1.id AND p1.id = k.id1 AND k.id2 = p2.id AND c.id = " +
                                   std::to_string(cids[cids.size() / 2])},
  };
}

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<PlotSeries>& series, bool log_x, bool log_y) {
  const double W = 640, H = 420, L = 70, R = 160, T = 40, B = 50;
  auto tx = [&](double v) { return log_x ? std::log10(std::max(v, 1e-12)) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(std::max(v, 1e-12)) : v; };
  double x0 = std::numeric_limits<double>::max(), x1 = std::numeric_limits<double>::lowest();
  double y0 = x0, y1 = x1;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!log_y) y0 = std::min(y0, 0.0);
  if (x1 - x0 < 1e-9) x1 = x0 + 1;
  if (y1 - y0 < 1e-9) y1 = y0 + 1;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
  auto tick = [](double v, bool lg) { return fmt(lg ? std::pow(10.0, v) : v); };

  static const char* const colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title)
      << "</text>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = x0 + (x1 - x0) * i / 4, vy = y0 + (y1 - y0) * i / 4;
    const double sx = L + (W - L - R) * i / 4, sy = H - B - (H - T - B) * i / 4;
    svg << "<text x=\"" << sx << "\" y=\"" << H - B + 15 << "\" text-anchor=\"middle\">" << tick(vx, log_x)
        << "</text>\n"
        << "<text x=\"" << L - 5 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">" << tick(vy, log_y) << "</text>\n";
  }
  svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape_xml(x_label)
      << "</text>\n"
      << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      svg << fmt(px(series[s].x[i])) << ',' << fmt(py(series[s].y[i])) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * s + 10 << "\" fill=\"" << color << "\">"
        << escape_xml(series[s].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string plot_micro(const std::vector<MicroRow>& rows, MicroKind which) {
  std::vector<PlotSeries> series{{"vanilla", {}, {}}, {"predefined", {}, {}}};
  for (const auto& r : rows) {
    auto& s = series[r.mode == "vanilla" ? 0 : 1];
    s.x.push_back(r.selectivity);
    s.y.push_back(r.wall_ms);
  }
  return svg_line_chart(which == MicroKind::P ? "MICRO-P" : "MICRO-K",
                        which == MicroKind::P ? "Person selectivity" : "Knows selectivity", "wall ms", series, true,
                        false);
}

std::string plot_ablation(const std::vector<AblationRow>& rows) {
  std::vector<PlotSeries> series;
  for (const auto& cfg : ablation_configs()) series.push_back({cfg.name, {}, {}});
  std::map<std::string, double> query_index;
  for (const auto& r : rows) {
    const double qi = query_index.try_emplace(r.query, static_cast<double>(query_index.size() + 1)).first->second;
    for (auto& s : series)
      if (s.label == r.config) {
        s.x.push_back(qi);
        s.y.push_back(static_cast<double>(std::max<std::uint64_t>(r.tuples_materialized, 1)));
      }
  }
  return svg_line_chart("Ablation", "query", "tuples materialized", series, false, true);
}

std::string plot_spectrum(const SpectrumReport& report) {
  std::vector<PlotSeries> series{{"baseline", {}, {}}, {"rewritten", {}, {}}};
  for (const auto& c : report.cdf) {
    series[0].x.push_back(c.threshold);
    series[0].y.push_back(static_cast<double>(c.baseline));
    series[1].x.push_back(c.threshold);
    series[1].y.push_back(static_cast<double>(c.rewritten));
  }
  return svg_line_chart("Plan spectrum", "wall ms threshold", "plans within threshold", series, true, false);
}

}  // namespace predjoin
