#include "predjoin/plan.hpp"

#include <sstream>

namespace predjoin {

const char* to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Scan: return "Scan";
    case OpKind::ScanSJ: return "ScanSJ";
    case OpKind::HashJoin: return "HashJoin";
    case OpKind::SJoin: return "SJoin";
    case OpKind::SJoinIdxR: return "SJoinIdxR";
    case OpKind::SJoinIdxM: return "SJoinIdxM";
    case OpKind::Project: return "Project";
    case OpKind::Aggregate: return "Aggregate";
  }
  return "?";
}

std::set<std::string> subtree_aliases(const PlanNode& node) {
  std::set<std::string> out;
  visit(node, [&](const PlanNode& n) {
    if (is_scan(n.kind)) out.insert(n.alias);
  });
  return out;
}

std::vector<const PlanNode*> probe_spine_scans(const PlanNode& node) {
  const PlanNode* cur = &node;
  while (!is_scan(cur->kind)) {
    if (is_join(cur->kind))
      cur = &cur->probe();
    else
      cur = &cur->child();
  }
  return {cur};
}

std::size_t count_kind(const PlanNode& node, OpKind kind) {
  std::size_t n = 0;
  visit(node, [&](const PlanNode& x) { n += x.kind == kind; });
  return n;
}

std::size_t count_scans(const PlanNode& node) {
  return count_kind(node, OpKind::Scan) + count_kind(node, OpKind::ScanSJ);
}

namespace {

std::string ref(const ColumnRef& c) {
  return c.alias + "." + (c.column == kRidColumn ? std::string("RID") : c.column);
}

std::string literal(const FilterPredicate& f) {
  if (f.type == DataType::Str) return "'" + std::get<std::string>(f.constant) + "'";
  if (f.type == DataType::Date) return "DATE '" + format_date(std::get<std::int64_t>(f.constant)) + "'";
  return std::to_string(std::get<std::int64_t>(f.constant));
}

std::string keys_text(const std::vector<JoinKey>& keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i)
    out += (i ? " AND " : "") + ref(keys[i].build) + " = " + ref(keys[i].probe);
  return out;
}

void render(const PlanNode& n, int depth, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << to_string(n.kind);
  switch (n.kind) {
    case OpKind::Scan:
    case OpKind::ScanSJ: {
      out << " " << n.alias << " (" << n.table << ") [";
      for (std::size_t i = 0; i < n.columns.size(); ++i) out << (i ? ", " : "") << n.columns[i];
      out << "]";
      for (std::size_t i = 0; i < n.filters.size(); ++i)
        out << (i ? " AND " : " WHERE ") << ref(n.filters[i].column) << " " << to_string(n.filters[i].op) << " "
            << literal(n.filters[i]);
      break;
    }
    case OpKind::HashJoin:
    case OpKind::SJoin:
    case OpKind::SJoinIdxR:
      out << " " << keys_text(n.keys);
      break;
    case OpKind::SJoinIdxM:
      out << " " << keys_text(n.keys) << " via " << n.merged_alias;
      break;
    case OpKind::Project:
      out << " ";
      for (std::size_t i = 0; i < n.outputs.size(); ++i) out << (i ? ", " : "") << ref(n.outputs[i]);
      break;
    case OpKind::Aggregate:
      switch (n.aggregate->kind) {
        case AggKind::CountStar: out << " COUNT(*)"; break;
        case AggKind::Min: out << " MIN(" << ref(n.aggregate->column) << ")"; break;
        case AggKind::Max: out << " MAX(" << ref(n.aggregate->column) << ")"; break;
      }
      break;
  }
  if (is_join(n.kind)) {
    if (!n.residual.empty()) out << " residual " << keys_text(n.residual);
    if (passes_sip(n.kind)) out << " sip->" << n.sip_target;
  }
  out << '\n';
  for (const auto& c : n.children) render(c, depth + 1, out);
}

}  // namespace

std::string explain(const LogicalPlan& plan) {
  std::ostringstream out;
  render(plan.root, 0, out);
  return out.str();
}

}  // namespace predjoin
