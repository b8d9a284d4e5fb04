#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "predjoin/bitset.hpp"
#include "predjoin/value.hpp"

namespace predjoin {

class RidIndex;
class ExtendedRidIndex;

// Exact semijoin filter over one table: one bit per zone and one bit per row.
// zone_bits[z] is set iff some row of zone z is set.
struct SipFilter {
  std::string target_alias;
  Bitset zone_bits;
  Bitset row_bits;

  bool operator==(const SipFilter&) const = default;
};

// Bits are set by direct indexing; no hashing. Throws RidOutOfRange.
SipFilter build_sip_filters(std::span<const Rid> rids, std::size_t table_size, std::size_t zone_size);

// Row bits = union of index.neighbors(r) over build_rids; the filter covers F.
SipFilter build_reverse_sip_filters(std::span<const Rid> build_rids, const RidIndex& index, std::size_t zone_size);

// Hash entries of a merged join: entry i joins build row `build_row[i]` to far RID `far_rid[i]`.
struct MergedBuild {
  std::vector<std::uint32_t> build_row;
  std::vector<Rid> far_rid;
  SipFilter filter;  // over the far table
};

// near_rids[i] is the near-side RID of build row i. One entry per (row, index pair).
MergedBuild expand_merged_build(std::span<const Rid> near_rids, const ExtendedRidIndex& index,
                                std::size_t far_table_size, std::size_t zone_size);

// Row-wise AND of filters over one table; zone bits are derived from the combined rows.
SipFilter intersect(std::span<const SipFilter> filters, std::size_t zone_size);

}  // namespace predjoin
