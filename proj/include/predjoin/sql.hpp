#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "predjoin/storage.hpp"
#include "predjoin/value.hpp"

namespace predjoin {

class Catalog;

struct ColumnRef {
  std::string alias;
  std::string column;

  bool operator==(const ColumnRef&) const = default;
  auto operator<=>(const ColumnRef&) const = default;
  std::string str() const { return alias + "." + column; }
};

struct Relation {
  std::string table;
  std::string alias;

  bool operator==(const Relation&) const = default;
};

// alias_a.col = alias_b.col across two distinct aliases.
struct JoinPredicate {
  ColumnRef left;
  ColumnRef right;

  bool operator==(const JoinPredicate&) const = default;
};

struct FilterPredicate {
  ColumnRef column;
  CmpOp op = CmpOp::Eq;
  Value constant;
  DataType type = DataType::Int64;

  bool operator==(const FilterPredicate&) const = default;
};

enum class AggKind { CountStar, Min, Max };

struct AggregateSpec {
  AggKind kind = AggKind::CountStar;
  ColumnRef column;  // unused for COUNT(*)

  bool operator==(const AggregateSpec&) const = default;
};

// A resolved conjunctive select-project-join query. Either `projection` or `aggregate`.
struct QuerySpec {
  std::vector<Relation> relations;
  std::vector<JoinPredicate> join_preds;
  std::vector<FilterPredicate> filter_preds;
  std::vector<ColumnRef> projection;
  std::optional<AggregateSpec> aggregate;

  bool operator==(const QuerySpec&) const = default;

  std::size_t alias_index(std::string_view alias) const;
  const Relation& relation(std::string_view alias) const { return relations[alias_index(alias)]; }
};

struct QueryStmt {
  QuerySpec query;
  bool explain = false;
};

struct PredefineJoinStmt {
  std::string from_table;
  std::vector<std::string> from_cols;
  std::string to_table;
  std::vector<std::string> to_cols;
};

// CREATE RID INDEX ON F REFERENCES P(from_cols)
struct CreateRidIndexStmt {
  std::string from_table;
  std::string to_table;
  std::vector<std::string> from_cols;
};

// CREATE EXTENDED RID INDEX ON F FROM P1(near_cols) TO P2(far_cols)
struct CreateExtendedRidIndexStmt {
  std::string from_table;
  std::string near_table;
  std::vector<std::string> near_cols;
  std::string far_table;
  std::vector<std::string> far_cols;
};

struct CreateTableStmt {
  std::string name;
  std::vector<ColumnDef> columns;
};

struct CopyCsvStmt {
  std::string table;
  std::string path;
  bool header = false;
};

using Statement = std::variant<QueryStmt, PredefineJoinStmt, CreateRidIndexStmt, CreateExtendedRidIndexStmt,
                               CreateTableStmt, CopyCsvStmt>;

// Parses one statement (optional trailing ';') and resolves queries against `catalog`.
// Errors: SyntaxError (SqlSyntaxError), ResolutionError, UnsupportedFeature.
Statement parse(std::string_view text, const Catalog& catalog);

// Convenience for callers that only expect a query.
QuerySpec parse_query(std::string_view text, const Catalog& catalog);

// Canonical SQL text for a query; parse(render(q)) == q.
std::string render(const QuerySpec& query);

struct ScriptStatement {
  std::size_t offset = 0;  // byte offset of the statement in the script
  std::string text;
};

// Splits on ';' outside string literals; drops blank statements and '--' comments.
std::vector<ScriptStatement> split_script(std::string_view script);

}  // namespace predjoin
