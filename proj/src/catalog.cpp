#include "predjoin/catalog.hpp"

#include "predjoin/error.hpp"

namespace predjoin {

Table& Catalog::create_table(const std::string& name, std::vector<ColumnDef> schema) {
  if (tables_.count(name)) fail(ErrorKind::DuplicateTable, name);
  auto table = std::make_unique<Table>(name, std::move(schema));
  auto& ref = *table;
  tables_.emplace(name, std::move(table));
  order_.push_back(name);
  return ref;
}

Table* Catalog::find_table(const std::string& name) {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : it->second.get();
}

const Table* Catalog::find_table(const std::string& name) const {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : it->second.get();
}

Table& Catalog::table(const std::string& name) {
  if (auto* t = find_table(name)) return *t;
  fail(ErrorKind::UnknownTable, name);
}

const Table& Catalog::table(const std::string& name) const {
  if (const auto* t = find_table(name)) return *t;
  fail(ErrorKind::UnknownTable, name);
}

const PredefinedJoin* Catalog::find_join(const std::string& from_table,
                                         const std::vector<std::string>& from_cols,
                                         const std::string& to_table) const {
  for (const auto& j : joins_)
    if (j.from_table == from_table && j.from_cols == from_cols && j.to_table == to_table) return &j;
  return nullptr;
}

const PredefinedJoin* Catalog::find_join(const std::string& from_table,
                                         const std::vector<std::string>& from_cols) const {
  for (const auto& j : joins_)
    if (j.from_table == from_table && j.from_cols == from_cols) return &j;
  return nullptr;
}

const PredefinedJoin& Catalog::add_join(PredefinedJoin join) {
  join.id = static_cast<int>(joins_.size());
  joins_.push_back(std::move(join));
  return joins_.back();
}

const RidIndex* Catalog::find_rid_index(int join_id) const {
  for (const auto& idx : rid_indices_)
    if (idx.join_id() == join_id) return &idx;
  return nullptr;
}

const ExtendedRidIndex* Catalog::find_extended_index(int near_join_id, int far_join_id) const {
  for (const auto& idx : extended_indices_)
    if (idx.near_join_id() == near_join_id && idx.far_join_id() == far_join_id) return &idx;
  return nullptr;
}

const RidIndex& Catalog::add_rid_index(RidIndex index) {
  rid_indices_.push_back(std::move(index));
  return rid_indices_.back();
}

const ExtendedRidIndex& Catalog::add_extended_index(ExtendedRidIndex index) {
  extended_indices_.push_back(std::move(index));
  return extended_indices_.back();
}

}  // namespace predjoin
