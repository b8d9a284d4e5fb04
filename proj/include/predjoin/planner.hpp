#pragma once

#include <cstddef>
#include <vector>

#include "predjoin/cardinality.hpp"
#include "predjoin/plan.hpp"

namespace predjoin {

class Catalog;

// Nested sets: join merging needs reverse semijoins, which need RID materialization.
struct AblationFlags {
  bool enable_rid_materialization = true;
  bool enable_reverse_semijoin = true;
  bool enable_join_merging = true;

  bool valid() const {
    return (!enable_reverse_semijoin || enable_rid_materialization) &&
           (!enable_join_merging || enable_reverse_semijoin);
  }
  static AblationFlags full() { return {true, true, true}; }
  static AblationFlags no_jm() { return {true, true, false}; }
  static AblationFlags no_jm_rsj() { return {true, false, false}; }
  static AblationFlags vanilla() { return {false, false, false}; }
};

// Hash-join plan chosen by dynamic programming over connected subsets, minimizing the sum
// of intermediate cardinalities; the smaller input builds. Throws DisconnectedJoinGraph.
LogicalPlan plan_baseline(const Catalog& catalog, const QuerySpec& query, CardinalitySource& cards);

// Replaces hash joins that evaluate predefined joins with SJoin / SJoinIdxR / SJoinIdxM
// and marks the scans that receive sip filters as ScanSJ. Never swaps build and probe.
LogicalPlan rewrite_predefined(const Catalog& catalog, const LogicalPlan& plan, const AblationFlags& flags);

// All cross-product-free ordered binary join trees, deterministic order, at most `cap`.
std::vector<LogicalPlan> enumerate_plans(const Catalog& catalog, const QuerySpec& query, std::size_t cap);

// Number of plans enumerate_plans would return without a cap.
std::size_t count_plans(const QuerySpec& query);

}  // namespace predjoin
