#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "predjoin/catalog.hpp"
#include "predjoin/exec.hpp"
#include "predjoin/planner.hpp"

namespace predjoin {

struct SocialDbConfig {
  std::size_t n_person = 1000;
  double avg_degree = 10;
  std::size_t n_comment_per_person = 2;
  std::uint64_t seed = 1;
  double zipf_exponent = 1.2;
};

// Deterministic helpers shared by the generator and its replay checks.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);
double uniform_unit(std::mt19937_64& rng);

// Out-degree of every person, drawn first from the seeded stream.
std::vector<std::size_t> sample_out_degrees(const SocialDbConfig& config);

inline std::int64_t person_id(std::size_t rid) { return 1000 + 7 * static_cast<std::int64_t>(rid); }

// Person(id, name, country), Knows(id1, id2, creationDate), Comment(id, creatorId, creationDate, content).
// Knows is clustered by source person, Comment by creator; creation dates within one table are distinct.
Catalog generate_social(const SocialDbConfig& config);

// Predefines Knows.id1, Knows.id2 and Comment.creatorId against Person, builds a RID index on each,
// and forward and backward extended RID indices on Knows.
void prepare_social_indices(Catalog& catalog);

// Writes one CSV per table plus load.sql into `dir`.
void dump_social(const Catalog& catalog, const std::string& dir, bool with_indices);

struct BenchOptions {
  std::size_t zone_size = 1024;
  std::size_t repetitions = 5;  // timing = median after one warm-up run
  std::size_t warmup = 1;
};

// Executes a plan repeatedly; stats of the last run with the median wall time.
QueryResult timed_execute(const LogicalPlan& plan, const Catalog& catalog, const BenchOptions& options);

// Order-insensitive result equality.
bool same_multiset(const QueryResult& a, const QueryResult& b);

// Threshold c with exactly max(1, round(selectivity * n)) values < c (capped at n).
std::int64_t quantile_threshold(std::vector<std::int64_t> values, double selectivity);

enum class MicroKind { P, K };

struct MicroSpec {
  MicroKind which = MicroKind::P;
  double fixed_selectivity = 0.999;
  std::vector<double> swept = {0.0001, 0.001, 0.01, 0.1, 1.0};
};

struct MicroRow {
  double selectivity = 0;
  std::string mode;  // vanilla | predefined
  double wall_ms = 0;
  std::uint64_t knows_tuples_materialized = 0;
  std::uint64_t person_tuples_materialized = 0;
  std::uint64_t total_tuples_materialized = 0;
  std::int64_t result_count = 0;
};

// `catalog` must come from generate_social + prepare_social_indices.
std::vector<MicroRow> run_micro(const MicroSpec& spec, const Catalog& catalog, const BenchOptions& options);
std::string micro_csv(const std::vector<MicroRow>& rows);

struct SuiteQuery {
  std::string name;
  std::string sql;
};

// Ten queries over the social schema; constants derive from the data.
std::vector<SuiteQuery> social_suite(const Catalog& catalog);

struct AblationConfig {
  std::string name;
  AblationFlags flags;
};

// GR-FULL, GR-JM, GR-JM-RSJ, vanilla.
std::vector<AblationConfig> ablation_configs();

struct AblationRow {
  std::string query;
  std::string config;
  double wall_ms = 0;
  std::uint64_t tuples_materialized = 0;
  std::size_t scan_operators = 0;
};

std::vector<AblationRow> run_ablation(const std::vector<SuiteQuery>& suite, const Catalog& catalog,
                                      const BenchOptions& options);
std::string ablation_csv(const std::vector<AblationRow>& rows);

struct SpectrumPlanRow {
  std::size_t plan_id = 0;
  std::string variant;  // baseline | rewritten
  double wall_ms = 0;
  std::uint64_t tuples_materialized = 0;
};

struct CdfRow {
  double threshold = 0;
  std::size_t baseline = 0;
  std::size_t rewritten = 0;
};

struct SpectrumReport {
  std::string query;
  std::vector<SpectrumPlanRow> plans;
  std::vector<CdfRow> cdf;  // over wall_ms
  std::uint64_t best_baseline_tuples = 0;
  std::size_t baseline_within_best = 0;   // baseline plans with tuples <= best baseline
  std::size_t rewritten_within_best = 0;  // rewritten plans with tuples <= best baseline
};

// Executes every enumerated plan and its rewrite. Empty thresholds = 12 log-spaced steps.
SpectrumReport run_spectrum(const std::string& sql, const Catalog& catalog, std::size_t cap,
                            const BenchOptions& options, std::vector<double> thresholds = {});
std::string spectrum_csv(const SpectrumReport& report);

// Three 4-relation queries, each with one highly selective end-point filter.
std::vector<SuiteQuery> spectrum_suite(const Catalog& catalog);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Static SVG line chart.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<PlotSeries>& series, bool log_x, bool log_y);

std::string plot_micro(const std::vector<MicroRow>& rows, MicroKind which);
std::string plot_ablation(const std::vector<AblationRow>& rows);
std::string plot_spectrum(const SpectrumReport& report);

}  // namespace predjoin
