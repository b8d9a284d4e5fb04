#include "predjoin/sip.hpp"

#include "predjoin/error.hpp"
#include "predjoin/ridindex.hpp"

namespace predjoin {

namespace {

SipFilter empty_filter(std::size_t table_size, std::size_t zone_size) {
  SipFilter f;
  f.row_bits = Bitset(table_size);
  f.zone_bits = Bitset((table_size + zone_size - 1) / zone_size);
  return f;
}

void set_rid(SipFilter& f, Rid rid, std::size_t zone_size) {
  if (rid < 0 || static_cast<std::size_t>(rid) >= f.row_bits.size())
    fail(ErrorKind::RidOutOfRange, "rid " + std::to_string(rid) + " outside table of " +
                                       std::to_string(f.row_bits.size()) + " rows");
  const auto r = static_cast<std::size_t>(rid);
  f.row_bits.set(r);
  f.zone_bits.set(r / zone_size);
}

// Zone z is set iff any row of z is set; word-at-a-time for aligned zones.
void derive_zone_bits(SipFilter& f, std::size_t zone_size) {
  f.zone_bits = Bitset(f.zone_bits.size());
  for (std::size_t z = 0; z < f.zone_bits.size(); ++z)
    if (f.row_bits.any_in(z * zone_size, (z + 1) * zone_size)) f.zone_bits.set(z);
}

}  // namespace

SipFilter build_sip_filters(std::span<const Rid> rids, std::size_t table_size, std::size_t zone_size) {
  PREDJOIN_CHECK(zone_size > 0, "zone size must be positive");
  SipFilter f = empty_filter(table_size, zone_size);
  for (auto r : rids) set_rid(f, r, zone_size);
  return f;
}

SipFilter build_reverse_sip_filters(std::span<const Rid> build_rids, const RidIndex& index, std::size_t zone_size) {
  PREDJOIN_CHECK(zone_size > 0, "zone size must be positive");
  SipFilter f = empty_filter(index.entry_count(), zone_size);
  const auto& offsets = index.offsets();
  const auto& values = index.values();
  const auto keys = static_cast<Rid>(index.key_count());
  // Index values are valid F RIDs by construction; only the probe RIDs need checking.
  for (auto p : build_rids) {
    if (p < 0 || p >= keys)
      fail(ErrorKind::RidOutOfRange, "rid " + std::to_string(p) + " outside index of " + std::to_string(keys) + " keys");
    const auto begin = static_cast<std::size_t>(offsets[static_cast<std::size_t>(p)]);
    const auto end = static_cast<std::size_t>(offsets[static_cast<std::size_t>(p) + 1]);
    for (std::size_t i = begin; i < end; ++i) f.row_bits.set(static_cast<std::size_t>(values[i]));
  }
  derive_zone_bits(f, zone_size);
  return f;
}

MergedBuild expand_merged_build(std::span<const Rid> near_rids, const ExtendedRidIndex& index,
                                std::size_t far_table_size, std::size_t zone_size) {
  MergedBuild out;
  out.filter = empty_filter(far_table_size, zone_size);
  for (std::size_t row = 0; row < near_rids.size(); ++row) {
    for (const auto& pair : index.extended_neighbors(near_rids[row])) {
      out.build_row.push_back(static_cast<std::uint32_t>(row));
      out.far_rid.push_back(pair.far);
      set_rid(out.filter, pair.far, zone_size);
    }
  }
  return out;
}

SipFilter intersect(std::span<const SipFilter> filters, std::size_t zone_size) {
  PREDJOIN_CHECK(!filters.empty(), "intersecting no filters");
  SipFilter out = filters[0];
  if (filters.size() == 1) return out;
  for (std::size_t i = 1; i < filters.size(); ++i) out.row_bits &= filters[i].row_bits;
  // Zone bits come from the combined rows so the zone invariant keeps holding.
  derive_zone_bits(out, zone_size);
  return out;
}

}  // namespace predjoin
