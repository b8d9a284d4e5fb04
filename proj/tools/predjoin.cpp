// Command-line entry point: scripts, plan inspection, benchmarks and data generation.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "predjoin/bench.hpp"
#include "predjoin/error.hpp"
#include "predjoin/session.hpp"

namespace {

using namespace predjoin;
using nlohmann::json;

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::size_t zone_size = 1024;
  std::string cards = "exact";
  bool no_rid_mat = false;
  bool no_rsj = false;
  bool no_jm = false;
  std::string stats_path;
  std::string plot_path;
  std::uint64_t seed = 42;
  std::size_t cap = 0;
  std::string format = "csv";

  std::string script_path;
  std::string inline_sql;

  std::string which = "P";
  std::vector<double> selectivities;
  double fixed = 0.999;
  std::size_t n_person = 0;
  double avg_degree = 0;
  std::size_t comments = 0;
  double zipf = 1.2;
  std::size_t reps = 5;
  std::string query_sql;
  std::size_t query_index = 0;
  std::vector<double> thresholds;
  std::string out_dir;
  bool with_indices = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UserError("cannot write " + path);
}

AblationFlags ablation_flags(const Flags& f) {
  AblationFlags a;
  a.enable_rid_materialization = !f.no_rid_mat;
  a.enable_reverse_semijoin = a.enable_rid_materialization && !f.no_rsj;
  a.enable_join_merging = a.enable_reverse_semijoin && !f.no_jm;
  return a;
}

SessionOptions session_options(const Flags& f) {
  SessionOptions o;
  o.zones.zone_size = f.zone_size;
  o.flags = ablation_flags(f);
  if (f.cards == "exact") {
    o.card_mode = CardinalityMode::ExactOracle;
  } else if (f.cards == "estimate") {
    o.card_mode = CardinalityMode::IndependenceEstimate;
  } else if (f.cards.starts_with("file=") && f.cards.size() > 5) {
    o.card_mode = CardinalityMode::UserFile;
    o.card_file = f.cards.substr(5);
  } else {
    throw UserError("--cards must be exact, estimate or file=PATH");
  }
  return o;
}

std::pair<std::string, std::filesystem::path> load_script(const Flags& f) {
  if (f.script_path.empty() && f.inline_sql.empty()) throw UserError("missing --script or --sql");
  if (f.script_path.empty()) return {f.inline_sql, std::filesystem::current_path()};
  // With both, the inline statements run after the script; positions count from the script start.
  std::string text = read_file(f.script_path);
  if (!f.inline_sql.empty()) text += "\n;\n" + f.inline_sql;
  return {text, std::filesystem::absolute(f.script_path).parent_path()};
}

json result_json(const QueryResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json out = json::array();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (r.column_types[i] == DataType::Int64)
        out.push_back(std::get<std::int64_t>(row[i]));
      else
        out.push_back(render_value(row[i], r.column_types[i]));
    }
    rows.push_back(std::move(out));
  }
  return {{"columns", r.column_names}, {"rows", rows}};
}

std::string cmd_run(const Flags& f) {
  auto [script, base] = load_script(f);
  Session session(session_options(f), base);
  std::string out;
  json stats = json::array();
  json results = json::array();
  bool first = true;
  for (const auto& o : session.run_script(script)) {
    if (o.kind == StatementOutcome::Kind::Explain) {
      out += "-- baseline\n" + o.explain_before + "-- rewritten\n" + o.explain_after;
      continue;
    }
    if (!o.result) continue;
    stats.push_back(json::parse(o.result->stats.to_json()));
    if (f.format == "json") {
      results.push_back(result_json(*o.result));
    } else {
      out += (first ? "" : "\n") + o.result->to_csv();
      first = false;
    }
  }
  if (f.format == "json") out += results.dump(2) + "\n";
  if (!f.stats_path.empty()) write_file(f.stats_path, stats.dump(2) + "\n");
  return out;
}

std::string cmd_explain(const Flags& f) {
  auto [script, base] = load_script(f);
  Session session(session_options(f), base);
  std::string out;
  for (const auto& o : session.run_script(script, true))
    if (o.kind == StatementOutcome::Kind::Explain)
      out += "-- baseline\n" + o.explain_before + "-- rewritten\n" + o.explain_after;
  return out;
}

Catalog bench_catalog(const Flags& f, std::size_t n_person, double avg_degree, std::size_t comments) {
  SocialDbConfig cfg;
  cfg.n_person = f.n_person ? f.n_person : n_person;
  cfg.avg_degree = f.avg_degree > 0 ? f.avg_degree : avg_degree;
  cfg.n_comment_per_person = f.comments ? f.comments : comments;
  cfg.seed = f.seed;
  cfg.zipf_exponent = f.zipf;
  Catalog c = generate_social(cfg);
  prepare_social_indices(c);
  return c;
}

BenchOptions bench_options(const Flags& f) {
  if (f.reps == 0) throw UserError("--reps must be positive");
  return {f.zone_size, f.reps, 1};
}

void maybe_plot(const Flags& f, const std::string& svg) {
  if (!f.plot_path.empty()) write_file(f.plot_path, svg);
}

std::string cmd_bench_micro(const Flags& f) {
  MicroSpec spec;
  if (f.which == "P" || f.which == "p")
    spec.which = MicroKind::P;
  else if (f.which == "K" || f.which == "k")
    spec.which = MicroKind::K;
  else
    throw UserError("--which must be P or K");
  spec.fixed_selectivity = f.fixed;
  if (!f.selectivities.empty()) spec.swept = f.selectivities;
  for (double s : spec.swept)
    if (!(s > 0 && s <= 1)) throw UserError("selectivities must be in (0, 1]");
  if (!(spec.fixed_selectivity > 0 && spec.fixed_selectivity <= 1)) throw UserError("--fixed must be in (0, 1]");
  const Catalog catalog = bench_catalog(f, 10000, 50, 1);
  const auto rows = run_micro(spec, catalog, bench_options(f));
  maybe_plot(f, plot_micro(rows, spec.which));
  if (f.format == "json") {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back({{"selectivity", r.selectivity}, {"mode", r.mode}, {"wall_ms", r.wall_ms},
                     {"knows_tuples_materialized", r.knows_tuples_materialized},
                     {"person_tuples_materialized", r.person_tuples_materialized},
                     {"total_tuples_materialized", r.total_tuples_materialized}, {"result_count", r.result_count}});
    return out.dump(2) + "\n";
  }
  return micro_csv(rows);
}

std::string cmd_bench_ablation(const Flags& f) {
  const Catalog catalog = bench_catalog(f, 4000, 20, 4);
  const auto rows = run_ablation(social_suite(catalog), catalog, bench_options(f));
  maybe_plot(f, plot_ablation(rows));
  if (f.format == "json") {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back({{"query", r.query}, {"config", r.config}, {"wall_ms", r.wall_ms},
                     {"tuples_materialized", r.tuples_materialized}, {"scan_operators", r.scan_operators}});
    return out.dump(2) + "\n";
  }
  return ablation_csv(rows);
}

std::string cmd_bench_spectrum(const Flags& f) {
  const Catalog catalog = bench_catalog(f, 2000, 10, 4);
  std::string sql = f.query_sql;
  if (sql.empty()) {
    const auto suite = spectrum_suite(catalog);
    if (f.query_index >= suite.size()) throw UserError("--query-index must be below " + std::to_string(suite.size()));
    sql = suite[f.query_index].sql;
  }
  const std::size_t cap = f.cap ? f.cap : std::numeric_limits<std::size_t>::max();
  const auto report = run_spectrum(sql, catalog, cap, bench_options(f), f.thresholds);
  maybe_plot(f, plot_spectrum(report));
  if (f.format == "json") {
    json plans = json::array(), cdf = json::array();
    for (const auto& p : report.plans)
      plans.push_back({{"plan_id", p.plan_id}, {"variant", p.variant}, {"wall_ms", p.wall_ms},
                       {"tuples_materialized", p.tuples_materialized}});
    for (const auto& c : report.cdf)
      cdf.push_back({{"threshold_ms", c.threshold}, {"baseline", c.baseline}, {"rewritten", c.rewritten}});
    return json{{"query", report.query},
                {"plans", plans},
                {"cdf", cdf},
                {"best_baseline_tuples", report.best_baseline_tuples},
                {"baseline_within_best", report.baseline_within_best},
                {"rewritten_within_best", report.rewritten_within_best}}
               .dump(2) +
           "\n";
  }
  return spectrum_csv(report);
}

std::string cmd_gen_data(const Flags& f) {
  if (f.out_dir.empty()) throw UserError("missing --out");
  SocialDbConfig cfg;
  cfg.n_person = f.n_person ? f.n_person : 1000;
  cfg.avg_degree = f.avg_degree > 0 ? f.avg_degree : 10;
  cfg.n_comment_per_person = f.comments ? f.comments : 2;
  cfg.seed = f.seed;
  cfg.zipf_exponent = f.zipf;
  const Catalog c = generate_social(cfg);
  dump_social(c, f.out_dir, f.with_indices);
  std::ostringstream out;
  out << "table,rows\n";
  for (const auto& name : c.table_names()) out << name << ',' << c.table(name).row_count() << '\n';
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"In-memory columnar query engine with predefined RID joins"};
  app.require_subcommand(1, 1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--zone-size", f.zone_size, "Rows per zone")->check(CLI::PositiveNumber);
    sub->add_option("--cards", f.cards, "Cardinalities: exact, estimate or file=PATH");
    sub->add_flag("--no-rid-mat", f.no_rid_mat, "Disable predefined-join rewrites (implies --no-rsj --no-jm)");
    sub->add_flag("--no-rsj", f.no_rsj, "Disable reverse semijoins (implies --no-jm)");
    sub->add_flag("--no-jm", f.no_jm, "Disable join merging");
    sub->add_option("--stats", f.stats_path, "Write execution stats JSON here");
    sub->add_option("--plot", f.plot_path, "Write an SVG plot here");
    sub->add_option("--seed", f.seed, "Data generator seed");
    sub->add_option("--cap", f.cap, "Maximum number of enumerated plans (0 = all)");
    sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_script = [&](CLI::App* sub) {
    sub->add_option("--script", f.script_path, "Statement script ('; '-separated)");
    sub->add_option("--sql", f.inline_sql, "Inline statements (run after --script, if both are given)");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--n-person", f.n_person, "Person rows");
    sub->add_option("--avg-degree", f.avg_degree, "Mean Knows out-degree");
    sub->add_option("--comments", f.comments, "Comments per person");
    sub->add_option("--zipf", f.zipf, "Degree distribution exponent");
    sub->add_option("--reps", f.reps, "Timed repetitions (median reported)");
  };

  auto* run = app.add_subcommand("run", "Execute a script; query results go to stdout");
  auto* expl = app.add_subcommand("explain", "Print plans before and after the predefined-join rewrite");
  auto* micro = app.add_subcommand("bench-micro", "Selectivity microbenchmark");
  auto* ablation = app.add_subcommand("bench-ablation", "Ablation over the social query suite");
  auto* spectrum = app.add_subcommand("bench-spectrum", "Execute every join order of one query");
  auto* gen = app.add_subcommand("gen-data", "Write a synthetic social database as CSV plus load.sql");
  for (auto* sub : {run, expl, micro, ablation, spectrum, gen}) add_common(sub);
  add_script(run);
  add_script(expl);
  for (auto* sub : {micro, ablation, spectrum, gen}) add_data(sub);
  micro->add_option("--which", f.which, "P (sweep Person) or K (sweep Knows)");
  micro->add_option("--selectivities", f.selectivities, "Swept selectivities")->delimiter(',');
  micro->add_option("--fixed", f.fixed, "Selectivity of the fixed predicate");
  spectrum->add_option("--query", f.query_sql, "Query to enumerate (default: shipped query)");
  spectrum->add_option("--query-index", f.query_index, "Shipped query index (0-2)");
  spectrum->add_option("--thresholds", f.thresholds, "CDF thresholds in ms")->delimiter(',');
  gen->add_option("--out", f.out_dir, "Output directory")->required();
  gen->add_flag("--with-indices", f.with_indices, "Append predefined joins and RID indices to load.sql");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    std::string out;
    if (*run) out = cmd_run(f);
    else if (*expl) out = cmd_explain(f);
    else if (*micro) out = cmd_bench_micro(f);
    else if (*ablation) out = cmd_bench_ablation(f);
    else if (*spectrum) out = cmd_bench_spectrum(f);
    else out = cmd_gen_data(f);
    std::cout << out << std::flush;
    return 0;
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Internal ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
