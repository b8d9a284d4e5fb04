#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "predjoin/value.hpp"

namespace predjoin {

class Catalog;
struct PredefinedJoin;

// CSR mapping from P RIDs to the ascending list of F RIDs that reference them.
class RidIndex {
 public:
  RidIndex() = default;
  // rid_column[f] is the P RID referenced by F row f; every value must be < key_count.
  static RidIndex build(std::span<const Rid> rid_column, std::size_t key_count, int join_id);

  int join_id() const { return join_id_; }
  std::size_t key_count() const { return offsets_.size() - 1; }
  std::size_t entry_count() const { return values_.size(); }
  const std::vector<std::int64_t>& offsets() const { return offsets_; }
  const std::vector<Rid>& values() const { return values_; }

  // Throws RidOutOfRange.
  std::span<const Rid> neighbors(Rid p_rid) const;

 private:
  int join_id_ = -1;
  std::vector<std::int64_t> offsets_{0};
  std::vector<Rid> values_;
};

struct RidPair {
  Rid f = 0;
  Rid far = 0;

  bool operator==(const RidPair&) const = default;
};

// RID index over the near join whose lists also carry the far-side RID of each F row.
class ExtendedRidIndex {
 public:
  ExtendedRidIndex() = default;
  static ExtendedRidIndex build(std::span<const Rid> near_rids, std::span<const Rid> far_rids,
                                std::size_t key_count, int near_join_id, int far_join_id);

  int near_join_id() const { return near_join_id_; }
  int far_join_id() const { return far_join_id_; }
  std::size_t key_count() const { return offsets_.size() - 1; }
  std::size_t entry_count() const { return entries_.size(); }
  const std::vector<std::int64_t>& offsets() const { return offsets_; }
  const std::vector<RidPair>& entries() const { return entries_; }

  // Throws RidOutOfRange.
  std::span<const RidPair> extended_neighbors(Rid p1_rid) const;

 private:
  int near_join_id_ = -1;
  int far_join_id_ = -1;
  std::vector<std::int64_t> offsets_{0};
  std::vector<RidPair> entries_;
};

// Build and register in the catalog. Errors: AlreadyIndexed, JoinsOnDifferentTables.
const RidIndex& build_rid_index(Catalog& catalog, const PredefinedJoin& join);
const ExtendedRidIndex& build_extended_rid_index(Catalog& catalog, const PredefinedJoin& near,
                                                 const PredefinedJoin& far);

}  // namespace predjoin
