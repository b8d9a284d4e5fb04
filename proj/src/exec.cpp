#include "predjoin/exec.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"
#include "predjoin/keys.hpp"

namespace predjoin {

std::uint64_t ExecStats::tuples_materialized() const {
  std::uint64_t n = 0;
  for (const auto& op : operators)
    if (is_scan(op.kind)) n += op.tuples_materialized;
  return n;
}

std::uint64_t ExecStats::tuples_materialized_of_table(const std::string& table) const {
  std::uint64_t n = 0;
  for (const auto& op : operators)
    if (is_scan(op.kind) && op.table == table) n += op.tuples_materialized;
  return n;
}

std::size_t ExecStats::scan_operators() const {
  std::size_t n = 0;
  for (const auto& op : operators) n += is_scan(op.kind);
  return n;
}

std::string ExecStats::to_json() const {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& op : operators) {
    nlohmann::json j{{"id", op.id}, {"kind", to_string(op.kind)}};
    if (is_scan(op.kind)) {
      j["alias"] = op.alias;
      j["table"] = op.table;
      j["zones_visited"] = op.zones_visited;
      j["tuples_materialized"] = op.tuples_materialized;
      j["tuples_emitted"] = op.tuples_emitted;
      if (op.kind == OpKind::ScanSJ) j["filter_sources"] = op.filter_sources;
    } else if (is_join(op.kind)) {
      if (!op.alias.empty()) j["sip_target"] = op.alias;
      j["build_rows"] = op.build_rows;
      j["probe_rows"] = op.probe_rows;
      j["output_rows"] = op.output_rows;
    } else {
      j["output_rows"] = op.output_rows;
    }
    ops.push_back(std::move(j));
  }
  nlohmann::json doc{{"operators", ops}, {"tuples_materialized", tuples_materialized()}, {"wall_ms", wall_ms}};
  return doc.dump(2);
}

std::string QueryResult::to_csv() const {
  auto escape = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    return out + "\"";
  };
  std::ostringstream out;
  for (std::size_t i = 0; i < column_names.size(); ++i) out << (i ? "," : "") << escape(column_names[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << escape(render_value(row[i], column_types[i]));
    out << '\n';
  }
  return out.str();
}

namespace {

struct Slot {
  ColumnRef ref;
  DataType type = DataType::Int64;
};

class Operator {
 public:
  virtual ~Operator() = default;
  virtual void open() = 0;
  // Fills `out` with the next non-empty chunk; false when exhausted.
  virtual bool next(DataChunk& out) = 0;

  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t slot_index(const ColumnRef& ref) const {
    for (std::size_t i = 0; i < slots_.size(); ++i)
      if (slots_[i].ref == ref) return i;
    fail(ErrorKind::Internal, "operator does not produce " + ref.str());
  }

 protected:
  std::vector<Slot> slots_;
};

std::vector<Vector> empty_columns(const std::vector<Slot>& slots) {
  std::vector<Vector> cols;
  cols.reserve(slots.size());
  for (const auto& s : slots) cols.push_back(Vector::of(s.type));
  return cols;
}

class ScanOp final : public Operator {
 public:
  ScanOp(const PlanNode& node, const Table& table, const ZoneConfig& zones, OperatorStats& stats, bool capture)
      : node_(node), table_(table), zones_(zones), stats_(stats), capture_(capture) {
    slots_.push_back({{node.alias, kRidColumn}, DataType::Int64});
    for (const auto& c : node.columns) {
      const std::size_t idx = table.column_index(c);
      col_index_.push_back(idx);
      slots_.push_back({{node.alias, c}, table.columns()[idx].type});
    }
    for (const auto& f : node.filters) filter_cols_.push_back(table.column_index(f.column.column));
  }

  void add_filter(SipFilter filter, int source) {
    filters_.push_back(std::move(filter));
    stats_.filter_sources.push_back(source);
  }

  void open() override {
    zone_ = 0;
    zone_count_ = zones_.zone_count(table_.row_count());
    if (node_.kind == OpKind::ScanSJ) {
      PREDJOIN_CHECK(!filters_.empty(), "ScanSJ " + node_.alias + " opened without a sip filter");
      combined_ = intersect(filters_, zones_.zone_size);
      if (capture_) stats_.combined_filter = *combined_;
    }
  }

  bool next(DataChunk& out) override {
    while (zone_ < zone_count_) {
      const std::size_t z = zone_++;
      if (combined_ && !combined_->zone_bits.test(z)) continue;
      const std::size_t begin = zones_.zone_begin(z);
      const std::size_t len = zones_.zone_length(z, table_.row_count());
      ++stats_.zones_visited;
      stats_.tuples_materialized += len;

      Bitset selection = combined_ ? combined_->row_bits.slice(begin, len) : Bitset(len, true);
      for (std::size_t i = 0; i < node_.filters.size(); ++i) apply_filter(node_.filters[i], filter_cols_[i], begin, selection);
      const std::size_t kept = selection.count();
      stats_.tuples_emitted += kept;
      if (kept == 0) continue;

      out.columns.clear();
      std::vector<std::int64_t> rids(len);
      for (std::size_t i = 0; i < len; ++i) rids[i] = static_cast<std::int64_t>(begin + i);
      out.columns.push_back(Vector::ints(std::move(rids)));
      for (auto c : col_index_) out.columns.push_back(table_.read(c, begin, len));
      out.selection = std::move(selection);
      return true;
    }
    return false;
  }

 private:
  void apply_filter(const FilterPredicate& f, std::size_t col, std::size_t begin, Bitset& sel) const {
    if (f.type == DataType::Str) {
      const auto values = table_.strings(col);
      const auto& constant = std::get<std::string>(f.constant);
      sel.for_each_set([&](std::size_t i) {
        if (!compare(values[begin + i], f.op, constant)) sel.reset(i);
      });
    } else {
      const auto values = table_.ints(col);
      const auto constant = std::get<std::int64_t>(f.constant);
      sel.for_each_set([&](std::size_t i) {
        if (!compare(values[begin + i], f.op, constant)) sel.reset(i);
      });
    }
  }

  const PlanNode& node_;
  const Table& table_;
  const ZoneConfig& zones_;
  OperatorStats& stats_;
  bool capture_;
  std::vector<std::size_t> col_index_;
  std::vector<std::size_t> filter_cols_;
  std::vector<SipFilter> filters_;
  std::optional<SipFilter> combined_;
  std::size_t zone_ = 0;
  std::size_t zone_count_ = 0;
};

class JoinOp final : public Operator {
 public:
  JoinOp(const PlanNode& node, std::unique_ptr<Operator> build, std::unique_ptr<Operator> probe,
         const Catalog& catalog, const ZoneConfig& zones, OperatorStats& stats)
      : node_(node), build_(std::move(build)), probe_(std::move(probe)), catalog_(catalog), zones_(zones),
        stats_(stats) {
    slots_ = build_->slots();
    slots_.insert(slots_.end(), probe_->slots().begin(), probe_->slots().end());
    for (const auto& k : node.keys) {
      build_key_.push_back(build_->slot_index(k.build));
      probe_key_.push_back(probe_->slot_index(k.probe));
    }
    for (const auto& k : node.residual) {
      build_residual_.push_back(build_->slot_index(k.build));
      probe_residual_.push_back(probe_->slot_index(k.probe));
    }
    int_keys_ = build_key_.size() == 1 && is_integral(build_->slots()[build_key_[0]].type);
  }

  void add_target(ScanOp* scan) { targets_.push_back(scan); }

  void open() override {
    build_->open();
    build_cols_ = empty_columns(build_->slots());
    DataChunk chunk;
    while (build_->next(chunk)) {
      chunk.selection.for_each_set([&](std::size_t r) {
        for (std::size_t c = 0; c < build_cols_.size(); ++c) build_cols_[c].push_from(chunk.columns[c], r);
      });
    }
    const std::size_t rows = build_cols_.empty() ? 0 : build_cols_[0].size();
    stats_.build_rows = rows;
    if (node_.predefined_join >= 0) {
      // RID keys are dense positions of the referenced table: address heads directly.
      const auto& keyed = catalog_.join(node_.kind == OpKind::SJoinIdxM ? node_.far_join : node_.predefined_join);
      dense_ = true;
      dense_head_.assign(catalog_.table(keyed.to_table).row_count(), -1);
    }

    if (node_.kind == OpKind::SJoinIdxM) {
      const auto* idx = catalog_.find_extended_index(node_.predefined_join, node_.far_join);
      PREDJOIN_CHECK(idx != nullptr, "missing extended RID index");
      const auto& far = catalog_.join(node_.far_join);
      MergedBuild merged = expand_merged_build(build_cols_[build_key_[0]].as_ints(), *idx,
                                               catalog_.table(far.to_table).row_count(), zones_.zone_size);
      for (std::size_t e = 0; e < merged.build_row.size(); ++e) insert_int(merged.far_rid[e], merged.build_row[e]);
      route(merged.filter);
    } else {
      for (std::size_t r = 0; r < rows; ++r) {
        if (int_keys_)
          insert_int(build_cols_[build_key_[0]].as_ints()[r], static_cast<std::uint32_t>(r));
        else
          insert_str(build_key(r), static_cast<std::uint32_t>(r));
      }
      if (node_.kind == OpKind::SJoin) {
        const auto& pj = catalog_.join(node_.predefined_join);
        route(build_sip_filters(build_cols_[build_key_[0]].as_ints(), catalog_.table(pj.to_table).row_count(),
                                zones_.zone_size));
      } else if (node_.kind == OpKind::SJoinIdxR) {
        const auto* idx = catalog_.find_rid_index(node_.predefined_join);
        PREDJOIN_CHECK(idx != nullptr, "missing RID index");
        route(build_reverse_sip_filters(build_cols_[build_key_[0]].as_ints(), *idx, zones_.zone_size));
      }
    }
    probe_->open();
  }

  bool next(DataChunk& out) override {
    DataChunk in;
    while (probe_->next(in)) {
      std::vector<std::uint32_t> build_rows;
      std::vector<std::uint32_t> probe_rows;
      stats_.probe_rows += in.selected();
      in.selection.for_each_set([&](std::size_t r) {
        std::int32_t e = lookup(in, r);
        for (; e >= 0; e = next_[static_cast<std::size_t>(e)]) {
          const std::uint32_t b = entry_row_[static_cast<std::size_t>(e)];
          if (!residual_ok(b, in, r)) continue;
          build_rows.push_back(b);
          probe_rows.push_back(static_cast<std::uint32_t>(r));
        }
      });
      if (build_rows.empty()) continue;
      out.columns = empty_columns(slots_);
      const std::size_t nb = build_cols_.size();
      for (std::size_t c = 0; c < nb; ++c) {
        out.columns[c].reserve(build_rows.size());
        for (auto b : build_rows) out.columns[c].push_from(build_cols_[c], b);
      }
      for (std::size_t c = 0; c < in.columns.size(); ++c) {
        out.columns[nb + c].reserve(probe_rows.size());
        for (auto p : probe_rows) out.columns[nb + c].push_from(in.columns[c], p);
      }
      out.selection = Bitset(build_rows.size(), true);
      stats_.output_rows += build_rows.size();
      return true;
    }
    return false;
  }

 private:
  void route(SipFilter filter) {
    filter.target_alias = node_.sip_target;
    for (auto* t : targets_) t->add_filter(filter, node_.id);
  }

  std::string build_key(std::size_t r) const {
    std::string key;
    for (auto c : build_key_) append_key(key, build_cols_[c], r);
    return key;
  }

  void insert_int(std::int64_t key, std::uint32_t row) {
    const auto e = static_cast<std::int32_t>(entry_row_.size());
    entry_row_.push_back(row);
    if (dense_) {
      PREDJOIN_CHECK(key >= 0 && static_cast<std::size_t>(key) < dense_head_.size(), "RID key out of range");
      auto& head = dense_head_[static_cast<std::size_t>(key)];
      next_.push_back(head);
      head = e;
      return;
    }
    auto [it, fresh] = int_head_.try_emplace(key, e);
    next_.push_back(fresh ? -1 : it->second);
    it->second = e;
  }

  void insert_str(std::string key, std::uint32_t row) {
    const auto e = static_cast<std::int32_t>(entry_row_.size());
    entry_row_.push_back(row);
    auto [it, fresh] = str_head_.try_emplace(std::move(key), e);
    next_.push_back(fresh ? -1 : it->second);
    it->second = e;
  }

  std::int32_t lookup(const DataChunk& in, std::size_t r) const {
    if (dense_) {
      const std::int64_t key = in.columns[probe_key_[0]].as_ints()[r];
      return key >= 0 && static_cast<std::size_t>(key) < dense_head_.size() ? dense_head_[static_cast<std::size_t>(key)]
                                                                             : -1;
    }
    if (int_keys_ || node_.kind == OpKind::SJoinIdxM) {
      auto it = int_head_.find(in.columns[probe_key_[0]].as_ints()[r]);
      return it == int_head_.end() ? -1 : it->second;
    }
    std::string key;
    for (auto c : probe_key_) append_key(key, in.columns[c], r);
    auto it = str_head_.find(key);
    return it == str_head_.end() ? -1 : it->second;
  }

  bool residual_ok(std::uint32_t b, const DataChunk& in, std::size_t r) const {
    for (std::size_t i = 0; i < build_residual_.size(); ++i) {
      const Vector& bv = build_cols_[build_residual_[i]];
      const Vector& pv = in.columns[probe_residual_[i]];
      if (bv.is_int() ? bv.as_ints()[b] != pv.as_ints()[r] : bv.as_strings()[b] != pv.as_strings()[r]) return false;
    }
    return true;
  }

  const PlanNode& node_;
  std::unique_ptr<Operator> build_;
  std::unique_ptr<Operator> probe_;
  const Catalog& catalog_;
  const ZoneConfig& zones_;
  OperatorStats& stats_;
  std::vector<ScanOp*> targets_;

  std::vector<std::size_t> build_key_, probe_key_, build_residual_, probe_residual_;
  bool int_keys_ = false;
  bool dense_ = false;
  std::vector<std::int32_t> dense_head_;
  std::vector<Vector> build_cols_;
  std::vector<std::uint32_t> entry_row_;
  std::vector<std::int32_t> next_;
  std::unordered_map<std::int64_t, std::int32_t, RidHash> int_head_;
  std::unordered_map<std::string, std::int32_t> str_head_;
};

class ProjectOp final : public Operator {
 public:
  ProjectOp(const PlanNode& node, std::unique_ptr<Operator> child, OperatorStats& stats)
      : child_(std::move(child)), stats_(stats) {
    for (const auto& c : node.outputs) {
      const std::size_t i = child_->slot_index(c);
      picks_.push_back(i);
      slots_.push_back(child_->slots()[i]);
    }
  }
  void open() override { child_->open(); }
  bool next(DataChunk& out) override {
    DataChunk in;
    if (!child_->next(in)) return false;
    out.columns.clear();
    for (auto i : picks_) out.columns.push_back(in.columns[i]);
    out.selection = std::move(in.selection);
    stats_.output_rows += out.selected();
    return true;
  }

 private:
  std::unique_ptr<Operator> child_;
  OperatorStats& stats_;
  std::vector<std::size_t> picks_;
};

class AggregateOp final : public Operator {
 public:
  AggregateOp(const PlanNode& node, std::unique_ptr<Operator> child, OperatorStats& stats)
      : spec_(*node.aggregate), child_(std::move(child)), stats_(stats) {
    if (spec_.kind == AggKind::CountStar) {
      slots_.push_back({{"", "COUNT(*)"}, DataType::Int64});
    } else {
      col_ = child_->slot_index(spec_.column);
      slots_.push_back(child_->slots()[col_]);
    }
  }
  void open() override {
    child_->open();
    done_ = false;
  }
  bool next(DataChunk& out) override {
    if (done_) return false;
    done_ = true;
    std::uint64_t count = 0;
    std::optional<Value> best;
    DataChunk in;
    while (child_->next(in)) {
      count += in.selected();
      if (spec_.kind == AggKind::CountStar) continue;
      const Vector& v = in.columns[col_];
      in.selection.for_each_set([&](std::size_t r) {
        Value x = v.at(r);
        if (!best || compare_values(x, spec_.kind == AggKind::Min ? CmpOp::Lt : CmpOp::Gt, *best)) best = std::move(x);
      });
    }
    out.columns.clear();
    if (spec_.kind == AggKind::CountStar) {
      out.columns.push_back(Vector::ints({static_cast<std::int64_t>(count)}));
    } else {
      if (!best) return false;  // no nulls: MIN/MAX of nothing is no row
      Vector v = Vector::of(slots_[0].type);
      if (v.is_int())
        v.as_ints().push_back(std::get<std::int64_t>(*best));
      else
        v.as_strings().push_back(std::get<std::string>(*best));
      out.columns.push_back(std::move(v));
    }
    out.selection = Bitset(1, true);
    stats_.output_rows = 1;
    return true;
  }

 private:
  AggregateSpec spec_;
  std::unique_ptr<Operator> child_;
  OperatorStats& stats_;
  std::size_t col_ = 0;
  bool done_ = false;
};

struct Builder {
  const Catalog& catalog;
  const ZoneConfig& zones;
  ExecStats& stats;
  bool capture;
  std::map<int, ScanOp*> scans;
  std::vector<std::pair<JoinOp*, const PlanNode*>> sip_joins;

  std::unique_ptr<Operator> build(const PlanNode& n) {
    OperatorStats& st = stats.operators.at(static_cast<std::size_t>(n.id));
    st.id = n.id;
    st.kind = n.kind;
    if (is_scan(n.kind)) {
      st.alias = n.alias;
      st.table = n.table;
      auto op = std::make_unique<ScanOp>(n, catalog.table(n.table), zones, st, capture);
      scans[n.id] = op.get();
      return op;
    }
    if (is_join(n.kind)) {
      st.alias = n.sip_target;
      auto b = build(n.build());
      auto p = build(n.probe());
      auto op = std::make_unique<JoinOp>(n, std::move(b), std::move(p), catalog, zones, st);
      if (passes_sip(n.kind)) sip_joins.emplace_back(op.get(), &n);
      return op;
    }
    auto child = build(n.child());
    if (n.kind == OpKind::Project) return std::make_unique<ProjectOp>(n, std::move(child), st);
    return std::make_unique<AggregateOp>(n, std::move(child), st);
  }

  void wire() {
    for (auto [op, node] : sip_joins) {
      for (const PlanNode* scan : probe_spine_scans(node->probe()))
        if (scan->kind == OpKind::ScanSJ && scan->alias == node->sip_target) op->add_target(scans.at(scan->id));
    }
  }
};

std::string slot_name(const Slot& s) { return s.ref.alias.empty() ? s.ref.column : s.ref.str(); }

}  // namespace

QueryResult execute(const LogicalPlan& plan, const Catalog& catalog, const ZoneConfig& zones,
                    const ExecOptions& options) {
  if (zones.zone_size == 0) fail(ErrorKind::ResolutionError, "zone size must be positive");
  QueryResult result;
  int max_id = -1;
  visit(plan.root, [&](const PlanNode& n) { max_id = std::max(max_id, n.id); });
  PREDJOIN_CHECK(max_id >= 0, "plan has no node ids");
  result.stats.operators.resize(static_cast<std::size_t>(max_id) + 1);

  const auto start = std::chrono::steady_clock::now();
  Builder builder{catalog, zones, result.stats, options.capture_filters, {}, {}};
  auto root = builder.build(plan.root);
  builder.wire();
  for (const auto& s : root->slots()) {
    result.column_names.push_back(slot_name(s));
    result.column_types.push_back(s.type);
  }
  root->open();
  DataChunk chunk;
  while (root->next(chunk)) {
    chunk.selection.for_each_set([&](std::size_t r) {
      std::vector<Value> row;
      row.reserve(chunk.columns.size());
      for (const auto& c : chunk.columns) row.push_back(c.at(r));
      result.rows.push_back(std::move(row));
    });
  }
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace predjoin
