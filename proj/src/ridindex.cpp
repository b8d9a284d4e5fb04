#include "predjoin/ridindex.hpp"

#include "predjoin/catalog.hpp"
#include "predjoin/error.hpp"

namespace predjoin {

namespace {

// Counting sort by key; entries within a key stay in ascending F RID order.
std::vector<std::int64_t> csr_offsets(std::span<const Rid> keys, std::size_t key_count) {
  std::vector<std::int64_t> offsets(key_count + 1, 0);
  for (auto k : keys) {
    if (k < 0 || static_cast<std::size_t>(k) >= key_count)
      fail(ErrorKind::RidOutOfRange, "rid " + std::to_string(k) + " >= " + std::to_string(key_count));
    ++offsets[static_cast<std::size_t>(k) + 1];
  }
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  return offsets;
}

void check_key(Rid key, std::size_t key_count) {
  if (key < 0 || static_cast<std::size_t>(key) >= key_count)
    fail(ErrorKind::RidOutOfRange, "rid " + std::to_string(key) + " outside [0, " + std::to_string(key_count) + ")");
}

}  // namespace

RidIndex RidIndex::build(std::span<const Rid> rid_column, std::size_t key_count, int join_id) {
  RidIndex idx;
  idx.join_id_ = join_id;
  idx.offsets_ = csr_offsets(rid_column, key_count);
  idx.values_.resize(rid_column.size());
  std::vector<std::int64_t> cursor(idx.offsets_.begin(), idx.offsets_.end() - 1);
  for (std::size_t f = 0; f < rid_column.size(); ++f)
    idx.values_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(rid_column[f])]++)] = static_cast<Rid>(f);
  return idx;
}

std::span<const Rid> RidIndex::neighbors(Rid p_rid) const {
  check_key(p_rid, key_count());
  const auto i = static_cast<std::size_t>(p_rid);
  return std::span<const Rid>(values_).subspan(static_cast<std::size_t>(offsets_[i]),
                                               static_cast<std::size_t>(offsets_[i + 1] - offsets_[i]));
}

ExtendedRidIndex ExtendedRidIndex::build(std::span<const Rid> near_rids, std::span<const Rid> far_rids,
                                         std::size_t key_count, int near_join_id, int far_join_id) {
  PREDJOIN_CHECK(near_rids.size() == far_rids.size(), "rid columns of one table differ in length");
  ExtendedRidIndex idx;
  idx.near_join_id_ = near_join_id;
  idx.far_join_id_ = far_join_id;
  idx.offsets_ = csr_offsets(near_rids, key_count);
  idx.entries_.resize(near_rids.size());
  std::vector<std::int64_t> cursor(idx.offsets_.begin(), idx.offsets_.end() - 1);
  for (std::size_t f = 0; f < near_rids.size(); ++f) {
    auto& slot = idx.entries_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(near_rids[f])]++)];
    slot = RidPair{static_cast<Rid>(f), far_rids[f]};
  }
  return idx;
}

std::span<const RidPair> ExtendedRidIndex::extended_neighbors(Rid p1_rid) const {
  check_key(p1_rid, key_count());
  const auto i = static_cast<std::size_t>(p1_rid);
  return std::span<const RidPair>(entries_).subspan(static_cast<std::size_t>(offsets_[i]),
                                                    static_cast<std::size_t>(offsets_[i + 1] - offsets_[i]));
}

const RidIndex& build_rid_index(Catalog& catalog, const PredefinedJoin& join) {
  if (catalog.find_rid_index(join.id))
    fail(ErrorKind::AlreadyIndexed, "RID index on " + join.from_table + join.rid_column.substr(3));
  const std::size_t keys = catalog.table(join.to_table).row_count();
  return catalog.add_rid_index(RidIndex::build(rid_column_of(catalog, join), keys, join.id));
}

const ExtendedRidIndex& build_extended_rid_index(Catalog& catalog, const PredefinedJoin& near,
                                                 const PredefinedJoin& far) {
  if (near.from_table != far.from_table)
    fail(ErrorKind::JoinsOnDifferentTables, near.from_table + " vs " + far.from_table);
  if (catalog.find_extended_index(near.id, far.id))
    fail(ErrorKind::AlreadyIndexed, "extended RID index on " + near.from_table + " from " +
                                        near.rid_column + " to " + far.rid_column);
  const std::size_t keys = catalog.table(near.to_table).row_count();
  return catalog.add_extended_index(ExtendedRidIndex::build(rid_column_of(catalog, near),
                                                            rid_column_of(catalog, far), keys, near.id, far.id));
}

}  // namespace predjoin
