#include "predjoin/session.hpp"

#include <fstream>

#include "predjoin/error.hpp"

namespace predjoin {

Session::Session(SessionOptions options, std::filesystem::path base_dir)
    : options_(std::move(options)), base_dir_(std::move(base_dir)) {}

std::string describe_position(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

PlannedQuery Session::plan(const QuerySpec& query) {
  PlannedQuery out{query, {}, {}};
  CardinalitySource cards = options_.card_mode == CardinalityMode::UserFile
                                ? CardinalitySource::from_file(catalog_, out.query, options_.card_file)
                                : CardinalitySource(catalog_, out.query, options_.card_mode);
  out.baseline = plan_baseline(catalog_, out.query, cards);
  out.rewritten = rewrite_predefined(catalog_, out.baseline, options_.flags);
  return out;
}

PlannedQuery Session::plan(std::string_view sql) { return plan(parse_query(sql, catalog_)); }

QueryResult Session::query(std::string_view sql) {
  const PlannedQuery p = plan(sql);
  return predjoin::execute(p.rewritten, catalog_, options_.zones, {options_.capture_filters});
}

StatementOutcome Session::execute(std::string_view statement, bool force_explain) {
  return dispatch(parse(statement, catalog_), force_explain);
}

StatementOutcome Session::dispatch(Statement stmt, bool force_explain) {
  StatementOutcome out;
  if (auto* q = std::get_if<QueryStmt>(&stmt)) {
    const PlannedQuery p = plan(q->query);
    if (q->explain || force_explain) {
      out.kind = StatementOutcome::Kind::Explain;
      out.explain_before = explain(p.baseline);
      out.explain_after = explain(p.rewritten);
    } else {
      out.kind = StatementOutcome::Kind::Query;
      out.result = predjoin::execute(p.rewritten, catalog_, options_.zones, {options_.capture_filters});
    }
  } else if (auto* s = std::get_if<CreateTableStmt>(&stmt)) {
    catalog_.create_table(s->name, s->columns);
    out.message = "CREATE TABLE " + s->name;
  } else if (auto* s = std::get_if<CopyCsvStmt>(&stmt)) {
    std::filesystem::path path(s->path);
    if (path.is_relative()) path = base_dir_ / path;
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
    const std::size_t rows = load_csv(catalog_.table(s->table), in, s->header);
    out.message = "COPY " + std::to_string(rows);
  } else if (auto* s = std::get_if<PredefineJoinStmt>(&stmt)) {
    const auto& j = predefine_join(catalog_, s->from_table, s->from_cols, s->to_table, s->to_cols);
    out.message = "PREDEFINE JOIN " + j.from_table + "." + j.rid_column;
  } else if (auto* s = std::get_if<CreateRidIndexStmt>(&stmt)) {
    const PredefinedJoin* j = catalog_.find_join(s->from_table, s->from_cols, s->to_table);
    if (!j) fail(ErrorKind::NotPredefined, s->from_table + " has no predefined join to " + s->to_table);
    build_rid_index(catalog_, *j);
    out.message = "CREATE RID INDEX ON " + s->from_table;
  } else if (auto* s = std::get_if<CreateExtendedRidIndexStmt>(&stmt)) {
    const PredefinedJoin* near = catalog_.find_join(s->from_table, s->near_cols, s->near_table);
    const PredefinedJoin* far = catalog_.find_join(s->from_table, s->far_cols, s->far_table);
    if (!near || !far)
      fail(ErrorKind::NotPredefined, "extended RID index needs both joins predefined on " + s->from_table);
    build_extended_rid_index(catalog_, *near, *far);
    out.message = "CREATE EXTENDED RID INDEX ON " + s->from_table;
  }
  return out;
}

std::vector<StatementOutcome> Session::run_script(std::string_view script, bool force_explain) {
  std::vector<StatementOutcome> out;
  for (const auto& st : split_script(script)) {
    try {
      out.push_back(execute(st.text, force_explain));
    } catch (const SqlSyntaxError& e) {
      throw Error(ErrorKind::SyntaxError, describe_position(script, st.offset + e.position()) + ": expected " +
                                              e.expected() + ", found " + e.found());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) throw;
      std::string what = e.what();
      const std::string prefix = std::string(to_string(e.kind())) + ": ";
      if (what.starts_with(prefix)) what.erase(0, prefix.size());
      throw Error(e.kind(), describe_position(script, st.offset) + ": " + what);
    }
  }
  return out;
}

}  // namespace predjoin
