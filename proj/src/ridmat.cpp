#include "predjoin/ridmat.hpp"

#include <unordered_map>

#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"
#include "predjoin/keys.hpp"

namespace predjoin {

std::string rid_column_name(const std::vector<std::string>& from_cols) {
  std::string name = "RID(";
  for (std::size_t i = 0; i < from_cols.size(); ++i) name += (i ? "," : "") + from_cols[i];
  return name + ")";
}

namespace {

std::vector<std::size_t> resolve_user_columns(const Table& table, const std::vector<std::string>& cols) {
  std::vector<std::size_t> out;
  for (const auto& c : cols) {
    auto idx = table.find_user_column(c);
    if (!idx) fail(ErrorKind::UnknownColumn, table.name() + "." + c);
    out.push_back(*idx);
  }
  return out;
}

std::string row_key(const Table& table, const std::vector<std::size_t>& cols, std::size_t row) {
  std::string key;
  for (auto c : cols) {
    if (table.columns()[c].type == DataType::Str)
      append_key(key, table.strings(c)[row]);
    else
      append_key(key, table.ints(c)[row]);
  }
  return key;
}

std::string describe_row(const Table& table, const std::vector<std::size_t>& cols, std::size_t row) {
  std::string out = "(";
  for (std::size_t i = 0; i < cols.size(); ++i)
    out += (i ? "," : "") + render_value(table.value(cols[i], row), table.columns()[cols[i]].type);
  return out + ")";
}

// Maps each F row to the RID of its unique P partner in one pass over P and one over F.
template <typename Key, typename Hash, typename KeyFn>
std::vector<Rid> match_rows(const Table& from, const std::vector<std::size_t>& fcols, const Table& to,
                            const std::vector<std::size_t>& tcols, KeyFn key_of) {
  std::unordered_map<Key, Rid, Hash> lookup;
  lookup.reserve(to.row_count());
  for (std::size_t r = 0; r < to.row_count(); ++r) {
    if (!lookup.emplace(key_of(to, tcols, r), static_cast<Rid>(r)).second)
      fail(ErrorKind::NotAKey, to.name() + describe_row(to, tcols, r) + " appears more than once");
  }
  std::vector<Rid> rids(from.row_count());
  for (std::size_t r = 0; r < from.row_count(); ++r) {
    auto it = lookup.find(key_of(from, fcols, r));
    if (it == lookup.end())
      fail(ErrorKind::DanglingForeignKey, from.name() + " RID " + std::to_string(r) + " " +
                                              describe_row(from, fcols, r) + " has no match in " + to.name());
    rids[r] = it->second;
  }
  return rids;
}

}  // namespace

const PredefinedJoin& predefine_join(Catalog& catalog, const std::string& from_table,
                                     const std::vector<std::string>& from_cols, const std::string& to_table,
                                     const std::vector<std::string>& to_cols) {
  Table& from = catalog.table(from_table);
  const Table& to = catalog.table(to_table);
  if (from_cols.empty() || from_cols.size() != to_cols.size())
    fail(ErrorKind::ArityMismatch, "predefined join needs the same non-zero number of columns on both sides");
  const auto fcols = resolve_user_columns(from, from_cols);
  const auto tcols = resolve_user_columns(to, to_cols);
  for (std::size_t i = 0; i < fcols.size(); ++i) {
    if (from.columns()[fcols[i]].type != to.columns()[tcols[i]].type)
      fail(ErrorKind::ResolutionError, from_table + "." + from_cols[i] + " and " + to_table + "." + to_cols[i] +
                                           " have different types");
  }
  if (catalog.find_join(from_table, from_cols))
    fail(ErrorKind::AlreadyPredefined, from_table + rid_column_name(from_cols).substr(3));

  std::vector<Rid> rids;
  if (fcols.size() == 1 && to.columns()[tcols[0]].type != DataType::Str) {
    rids = match_rows<std::int64_t, std::hash<std::int64_t>>(
        from, fcols, to, tcols,
        [](const Table& t, const std::vector<std::size_t>& c, std::size_t r) { return t.ints(c[0])[r]; });
  } else {
    rids = match_rows<std::string, std::hash<std::string>>(from, fcols, to, tcols, row_key);
  }

  PredefinedJoin join{-1, from_table, from_cols, to_table, to_cols, rid_column_name(from_cols)};
  from.add_hidden_rid_column(join.rid_column, std::move(rids));
  from.freeze();
  catalog.table(to_table).freeze();
  return catalog.add_join(std::move(join));
}

std::span<const Rid> rid_column_of(const Catalog& catalog, const PredefinedJoin& join) {
  const Table& from = catalog.table(join.from_table);
  return from.ints(from.column_index(join.rid_column));
}

}  // namespace predjoin
