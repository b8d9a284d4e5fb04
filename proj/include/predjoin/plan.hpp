#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "predjoin/sql.hpp"

namespace predjoin {

enum class OpKind { Scan, ScanSJ, HashJoin, SJoin, SJoinIdxR, SJoinIdxM, Project, Aggregate };

const char* to_string(OpKind kind);

inline bool is_scan(OpKind k) { return k == OpKind::Scan || k == OpKind::ScanSJ; }
inline bool is_join(OpKind k) {
  return k == OpKind::HashJoin || k == OpKind::SJoin || k == OpKind::SJoinIdxR || k == OpKind::SJoinIdxM;
}
inline bool passes_sip(OpKind k) { return k == OpKind::SJoin || k == OpKind::SJoinIdxR || k == OpKind::SJoinIdxM; }

// Column name of the virtual positional RID of an alias.
inline const std::string kRidColumn = "#rid";

struct JoinKey {
  ColumnRef build;
  ColumnRef probe;

  bool operator==(const JoinKey&) const = default;
};

// One node of a logical plan. Fields are used according to `kind`:
//   Scan/ScanSJ:  alias, table, columns (emitted besides the RID), filters
//   joins:        children = {build, probe}; keys are equalities, build side first;
//                 residual equalities are checked after a key match
//   SJoin:        keys = {F.RID(cols) = P.#rid}, sip_target = P alias
//   SJoinIdxR:    keys = {P.#rid = F.RID(cols)}, sip_target = F alias, via RID index of predefined_join
//   SJoinIdxM:    keys = {P1.#rid = P2.#rid} through the extended index (predefined_join -> far_join);
//                 merged_alias is the relationship table that is never scanned
//   Project:      children = {input}, outputs
//   Aggregate:    children = {input}, aggregate
struct PlanNode {
  OpKind kind = OpKind::Scan;
  int id = -1;

  std::string alias;
  std::string table;
  std::vector<std::string> columns;
  std::vector<FilterPredicate> filters;

  std::vector<JoinKey> keys;
  std::vector<JoinKey> residual;
  int predefined_join = -1;
  int far_join = -1;
  std::string sip_target;
  std::string merged_alias;

  std::vector<ColumnRef> outputs;
  std::optional<AggregateSpec> aggregate;

  std::vector<PlanNode> children;

  const PlanNode& build() const { return children.at(0); }
  const PlanNode& probe() const { return children.at(1); }
  PlanNode& build() { return children.at(0); }
  PlanNode& probe() { return children.at(1); }
  const PlanNode& child() const { return children.at(0); }
};

struct LogicalPlan {
  PlanNode root;
};

// Aliases produced by the subtree (merged aliases excluded).
std::set<std::string> subtree_aliases(const PlanNode& node);

// Scan nodes reachable from `node` by repeatedly descending into probe children.
std::vector<const PlanNode*> probe_spine_scans(const PlanNode& node);

// Preorder walk.
template <typename Fn>
void visit(const PlanNode& node, Fn&& fn) {
  fn(node);
  for (const auto& c : node.children) visit(c, fn);
}

template <typename Fn>
void visit_mut(PlanNode& node, Fn&& fn) {
  fn(node);
  for (auto& c : node.children) visit_mut(c, fn);
}

std::size_t count_scans(const PlanNode& node);
std::size_t count_kind(const PlanNode& node, OpKind kind);

// Indented text, one node per line, operator kind first.
std::string explain(const LogicalPlan& plan);

}  // namespace predjoin
