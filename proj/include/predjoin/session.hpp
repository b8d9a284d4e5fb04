#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "predjoin/catalog.hpp"
#include "predjoin/exec.hpp"
#include "predjoin/planner.hpp"

namespace predjoin {

struct SessionOptions {
  ZoneConfig zones;
  CardinalityMode card_mode = CardinalityMode::ExactOracle;
  std::string card_file;  // used when card_mode == UserFile
  AblationFlags flags = AblationFlags::full();
  bool capture_filters = false;
};

struct PlannedQuery {
  QuerySpec query;
  LogicalPlan baseline;
  LogicalPlan rewritten;
};

struct StatementOutcome {
  enum class Kind { Ddl, Query, Explain };
  Kind kind = Kind::Ddl;
  std::string message;                  // DDL summary
  std::optional<QueryResult> result;    // queries
  std::string explain_before;           // EXPLAIN
  std::string explain_after;
};

// One catalog plus the settings used to plan and execute statements against it.
class Session {
 public:
  explicit Session(SessionOptions options = {}, std::filesystem::path base_dir = ".");

  Catalog& catalog() { return catalog_; }
  const Catalog& catalog() const { return catalog_; }
  const SessionOptions& options() const { return options_; }
  SessionOptions& options() { return options_; }

  // Relative COPY paths resolve against the base directory. With `force_explain`, queries are
  // planned but not executed.
  StatementOutcome execute(std::string_view statement, bool force_explain = false);

  // Runs every statement in order. Errors are rethrown with the statement's 1-based line.
  std::vector<StatementOutcome> run_script(std::string_view script, bool force_explain = false);

  PlannedQuery plan(const QuerySpec& query);
  PlannedQuery plan(std::string_view sql);
  QueryResult query(std::string_view sql);

 private:
  StatementOutcome dispatch(Statement stmt, bool force_explain);

  SessionOptions options_;
  std::filesystem::path base_dir_;
  Catalog catalog_;
};

// "line L, column C" of a byte offset.
std::string describe_position(std::string_view text, std::size_t offset);

}  // namespace predjoin
