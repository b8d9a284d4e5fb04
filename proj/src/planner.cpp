#include "predjoin/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"

namespace predjoin {

namespace {

AliasSet bit(std::size_t i) { return AliasSet{1} << i; }

PlanNode make_scan(const QuerySpec& q, std::size_t rel) {
  PlanNode n;
  n.kind = OpKind::Scan;
  n.alias = q.relations[rel].alias;
  n.table = q.relations[rel].table;
  for (const auto& f : q.filter_preds)
    if (f.column.alias == n.alias) n.filters.push_back(f);
  return n;
}

PlanNode make_join(const QuerySpec& q, PlanNode build, PlanNode probe) {
  const auto build_aliases = subtree_aliases(build);
  const auto probe_aliases = subtree_aliases(probe);
  PlanNode n;
  n.kind = OpKind::HashJoin;
  for (const auto& p : q.join_preds) {
    if (build_aliases.count(p.left.alias) && probe_aliases.count(p.right.alias))
      n.keys.push_back({p.left, p.right});
    else if (build_aliases.count(p.right.alias) && probe_aliases.count(p.left.alias))
      n.keys.push_back({p.right, p.left});
  }
  PREDJOIN_CHECK(!n.keys.empty(), "join without a predicate");
  n.children.push_back(std::move(build));
  n.children.push_back(std::move(probe));
  return n;
}

PlanNode wrap_root(const QuerySpec& q, PlanNode tree) {
  PlanNode root;
  if (q.aggregate) {
    root.kind = OpKind::Aggregate;
    root.aggregate = q.aggregate;
  } else {
    root.kind = OpKind::Project;
    root.outputs = q.projection;
  }
  root.children.push_back(std::move(tree));
  return root;
}

// Scan columns = every column referenced above the scan; ids in preorder.
void finalize(const Catalog& catalog, PlanNode& root) {
  std::map<std::string, std::set<std::string>> needed;
  visit(root, [&](const PlanNode& n) {
    auto note = [&](const ColumnRef& c) {
      if (c.column != kRidColumn) needed[c.alias].insert(c.column);
    };
    for (const auto& c : n.outputs) note(c);
    if (n.aggregate && n.aggregate->kind != AggKind::CountStar) note(n.aggregate->column);
    for (const auto& k : n.keys) {
      note(k.build);
      note(k.probe);
    }
    for (const auto& k : n.residual) {
      note(k.build);
      note(k.probe);
    }
  });
  int next_id = 0;
  visit_mut(root, [&](PlanNode& n) {
    n.id = next_id++;
    if (!is_scan(n.kind)) return;
    n.columns.clear();
    const auto& want = needed[n.alias];
    for (const auto& def : catalog.table(n.table).columns())
      if (want.count(def.name)) n.columns.push_back(def.name);
  });
}

void require_connected(const QuerySpec& q) {
  if (q.relations.empty()) fail(ErrorKind::ResolutionError, "query without relations");
  if (q.relations.size() > 20) fail(ErrorKind::UnsupportedFeature, "more than 20 relations");
  if (!is_connected(q, full_set(q)))
    fail(ErrorKind::DisconnectedJoinGraph, "join predicates do not connect all relations (cross products are not supported)");
}

}  // namespace

LogicalPlan plan_baseline(const Catalog& catalog, const QuerySpec& query, CardinalitySource& cards) {
  require_connected(query);
  const std::size_t n = query.relations.size();
  const AliasSet all = full_set(query);

  struct Best {
    double cost = std::numeric_limits<double>::infinity();
    AliasSet build = 0;
    AliasSet probe = 0;
  };
  std::vector<Best> best(std::size_t{1} << n);
  for (std::size_t i = 0; i < n; ++i) best[bit(i)].cost = 0;

  // Subsets in increasing numeric order visit every proper subset first.
  for (AliasSet s = 1; s <= all; ++s) {
    if ((s & (s - 1)) == 0 || !is_connected(query, s)) continue;
    const double card = cards.cardinality(s);
    for (AliasSet left = (s - 1) & s; left != 0; left = (left - 1) & s) {
      const AliasSet right = s & ~left;
      if (left > right) continue;  // each unordered split once
      if (!std::isfinite(best[left].cost) || !std::isfinite(best[right].cost) || !joined(query, left, right)) continue;
      const double cost = card + best[left].cost + best[right].cost;
      if (cost < best[s].cost) {
        const double lc = cards.cardinality(left);
        const double rc = cards.cardinality(right);
        best[s] = {cost, lc <= rc ? left : right, lc <= rc ? right : left};
      }
    }
  }

  auto build_tree = [&](auto&& self, AliasSet s) -> PlanNode {
    if ((s & (s - 1)) == 0) return make_scan(query, static_cast<std::size_t>(std::countr_zero(s)));
    return make_join(query, self(self, best[s].build), self(self, best[s].probe));
  };
  LogicalPlan plan{wrap_root(query, build_tree(build_tree, all))};
  finalize(catalog, plan.root);
  return plan;
}

namespace {

struct Shape {
  int leaf = -1;
  std::shared_ptr<const Shape> build;
  std::shared_ptr<const Shape> probe;
};

using ShapeList = std::vector<std::shared_ptr<const Shape>>;

const ShapeList& shapes(const QuerySpec& q, AliasSet s, std::map<AliasSet, ShapeList>& memo) {
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  ShapeList out;
  if ((s & (s - 1)) == 0) {
    out.push_back(std::make_shared<Shape>(Shape{std::countr_zero(s), nullptr, nullptr}));
  } else {
    // Build side enumerated as ascending submasks, then every probe tree per build tree.
    std::vector<AliasSet> subsets;
    for (AliasSet left = (s - 1) & s; left != 0; left = (left - 1) & s) subsets.push_back(left);
    std::sort(subsets.begin(), subsets.end());
    for (AliasSet left : subsets) {
      const AliasSet right = s & ~left;
      if (!is_connected(q, left) || !is_connected(q, right) || !joined(q, left, right)) continue;
      const ShapeList& lt = shapes(q, left, memo);
      const ShapeList& rt = shapes(q, right, memo);
      for (const auto& a : lt)
        for (const auto& b : rt) out.push_back(std::make_shared<Shape>(Shape{-1, a, b}));
    }
  }
  return memo.emplace(s, std::move(out)).first->second;
}

PlanNode from_shape(const QuerySpec& q, const Shape& shape) {
  if (shape.leaf >= 0) return make_scan(q, static_cast<std::size_t>(shape.leaf));
  return make_join(q, from_shape(q, *shape.build), from_shape(q, *shape.probe));
}

std::size_t count_shapes(const QuerySpec& q, AliasSet s, std::map<AliasSet, std::size_t>& memo) {
  if ((s & (s - 1)) == 0) return 1;
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  std::size_t total = 0;
  for (AliasSet left = (s - 1) & s; left != 0; left = (left - 1) & s) {
    const AliasSet right = s & ~left;
    if (!is_connected(q, left) || !is_connected(q, right) || !joined(q, left, right)) continue;
    total += count_shapes(q, left, memo) * count_shapes(q, right, memo);
  }
  return memo[s] = total;
}

}  // namespace

std::size_t count_plans(const QuerySpec& query) {
  require_connected(query);
  std::map<AliasSet, std::size_t> memo;
  return count_shapes(query, full_set(query), memo);
}

std::vector<LogicalPlan> enumerate_plans(const Catalog& catalog, const QuerySpec& query, std::size_t cap) {
  require_connected(query);
  if (cap == 0) fail(ErrorKind::ResolutionError, "plan cap must be positive");
  std::map<AliasSet, ShapeList> memo;
  const ShapeList& all = shapes(query, full_set(query), memo);
  std::vector<LogicalPlan> out;
  for (std::size_t i = 0; i < all.size() && out.size() < cap; ++i) {
    LogicalPlan plan{wrap_root(query, from_shape(query, *all[i]))};
    finalize(catalog, plan.root);
    out.push_back(std::move(plan));
  }
  return out;
}

namespace {

struct Rewriter {
  const Catalog& catalog;
  const AblationFlags& flags;
  std::map<std::string, std::string> alias_table;
  const PlanNode* root = nullptr;

  const std::string& table_of(const std::string& alias) const { return alias_table.at(alias); }

  // Finds the first registered predefined join covered by `keys` with its F alias on one side
  // and its P alias on the other. Returns the join and the indices of the covering keys.
  struct Match {
    const PredefinedJoin* join = nullptr;
    std::string f_alias;
    std::string p_alias;
    std::vector<std::size_t> covered;
  };

  std::optional<Match> match(const std::vector<JoinKey>& keys) const {
    for (const auto& pj : catalog.predefined_joins()) {
      for (const auto& seed : keys) {
        for (const auto& [f_ref, p_ref] : {std::pair{seed.build, seed.probe}, std::pair{seed.probe, seed.build}}) {
          if (table_of(f_ref.alias) != pj.from_table || table_of(p_ref.alias) != pj.to_table) continue;
          Match m{&pj, f_ref.alias, p_ref.alias, {}};
          bool ok = true;
          for (std::size_t i = 0; i < pj.from_cols.size() && ok; ++i) {
            const ColumnRef want_f{m.f_alias, pj.from_cols[i]};
            const ColumnRef want_p{m.p_alias, pj.to_cols[i]};
            auto it = std::find_if(keys.begin(), keys.end(), [&](const JoinKey& k) {
              return (k.build == want_f && k.probe == want_p) || (k.build == want_p && k.probe == want_f);
            });
            if (it == keys.end())
              ok = false;
            else
              m.covered.push_back(static_cast<std::size_t>(it - keys.begin()));
          }
          if (ok) return m;
        }
      }
    }
    return std::nullopt;
  }

  static std::vector<JoinKey> residual_of(const std::vector<JoinKey>& keys, const std::vector<std::size_t>& covered) {
    std::vector<JoinKey> out;
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (std::find(covered.begin(), covered.end(), i) == covered.end()) out.push_back(keys[i]);
    return out;
  }

  static bool mentions(const JoinKey& k, const std::string& alias) {
    return k.build.alias == alias || k.probe.alias == alias;
  }

  bool referenced_by_root(const std::string& alias) const {
    for (const auto& c : root->outputs)
      if (c.alias == alias) return true;
    return root->aggregate && root->aggregate->kind != AggKind::CountStar && root->aggregate->column.alias == alias;
  }

  std::size_t keys_mentioning(const std::string& alias) const {
    std::size_t n = 0;
    visit(*root, [&](const PlanNode& x) {
      for (const auto& k : x.keys) n += mentions(k, alias);
      for (const auto& k : x.residual) n += mentions(k, alias);
    });
    return n;
  }

  // J2 = node, J1 = node.build(); J1.probe() must be exactly Scan(F).
  std::optional<PlanNode> try_merge(const PlanNode& j2) const {
    if (j2.kind != OpKind::HashJoin) return std::nullopt;
    const PlanNode& j1 = j2.build();
    if (j1.kind != OpKind::HashJoin || j1.probe().kind != OpKind::Scan) return std::nullopt;
    const PlanNode& f_scan = j1.probe();
    const std::string& f = f_scan.alias;
    if (!f_scan.filters.empty() || referenced_by_root(f)) return std::nullopt;

    auto near = match(j1.keys);
    if (!near || near->f_alias != f || near->covered.size() != j1.keys.size()) return std::nullopt;

    std::vector<JoinKey> f_keys;
    for (const auto& k : j2.keys)
      if (mentions(k, f)) f_keys.push_back(k);
    if (f_keys.empty()) return std::nullopt;
    auto far = match(f_keys);
    if (!far || far->f_alias != f || far->covered.size() != f_keys.size()) return std::nullopt;
    // F takes part in no joins besides the two predefined ones.
    if (keys_mentioning(f) != j1.keys.size() + f_keys.size()) return std::nullopt;

    const ExtendedRidIndex* idx = catalog.find_extended_index(near->join->id, far->join->id);
    if (!idx) return std::nullopt;

    PlanNode m;
    m.kind = OpKind::SJoinIdxM;
    m.keys = {{{near->p_alias, kRidColumn}, {far->p_alias, kRidColumn}}};
    for (const auto& k : j2.keys)
      if (!mentions(k, f)) m.residual.push_back(k);
    m.predefined_join = near->join->id;
    m.far_join = far->join->id;
    m.merged_alias = f;
    m.sip_target = far->p_alias;
    m.children.push_back(j1.build());
    m.children.push_back(j2.probe());
    return m;
  }

  void merge(PlanNode& node) const {
    for (auto& c : node.children) merge(c);
    if (auto m = try_merge(node)) node = std::move(*m);
  }

  void rewrite_joins(PlanNode& node) const {
    for (auto& c : node.children) rewrite_joins(c);
    if (node.kind != OpKind::HashJoin) return;
    auto m = match(node.keys);
    if (!m) return;
    const auto build_aliases = subtree_aliases(node.build());
    const ColumnRef f_rid{m->f_alias, m->join->rid_column};
    const ColumnRef p_rid{m->p_alias, kRidColumn};
    node.residual = residual_of(node.keys, m->covered);
    node.predefined_join = m->join->id;
    if (build_aliases.count(m->f_alias)) {
      node.kind = OpKind::SJoin;
      node.keys = {{f_rid, p_rid}};
      node.sip_target = m->p_alias;
    } else {
      node.keys = {{p_rid, f_rid}};
      if (flags.enable_reverse_semijoin && catalog.find_rid_index(m->join->id)) {
        node.kind = OpKind::SJoinIdxR;
        node.sip_target = m->f_alias;
      }
    }
  }

  void mark_scansj(PlanNode& node) const {
    for (auto& c : node.children) mark_scansj(c);
    if (!passes_sip(node.kind)) return;
    PlanNode* cur = &node.probe();
    while (!is_scan(cur->kind)) cur = &cur->probe();
    if (cur->alias == node.sip_target) cur->kind = OpKind::ScanSJ;
  }
};

}  // namespace

LogicalPlan rewrite_predefined(const Catalog& catalog, const LogicalPlan& plan, const AblationFlags& flags) {
  if (!flags.valid()) fail(ErrorKind::ResolutionError, "ablation flags must form nested sets");
  LogicalPlan out = plan;
  if (!flags.enable_rid_materialization) return out;
  Rewriter rw{catalog, flags, {}, &out.root};
  visit(out.root, [&](const PlanNode& n) {
    if (is_scan(n.kind)) rw.alias_table[n.alias] = n.table;
  });
  if (flags.enable_join_merging) rw.merge(out.root);
  rw.rewrite_joins(out.root);
  rw.mark_scansj(out.root);
  finalize(catalog, out.root);
  return out;
}

}  // namespace predjoin
