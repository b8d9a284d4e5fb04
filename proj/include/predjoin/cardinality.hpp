#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "predjoin/sql.hpp"

namespace predjoin {

class Catalog;

// Bit i set = relation i of the query.
using AliasSet = std::uint32_t;

// Connectivity of the join graph restricted to `set`.
bool is_connected(const QuerySpec& query, AliasSet set);
bool joined(const QuerySpec& query, AliasSet a, AliasSet b);
AliasSet full_set(const QuerySpec& query);

// Number of result tuples of the sub-query over `set` with all applicable filters and
// join predicates. Equals a nested-loop count.
std::uint64_t exact_cardinality(const Catalog& catalog, const QuerySpec& query, AliasSet set);

enum class CardinalityMode { ExactOracle, IndependenceEstimate, UserFile };

// Memoized cardinalities for one planning session.
class CardinalitySource {
 public:
  CardinalitySource(const Catalog& catalog, const QuerySpec& query,
                    CardinalityMode mode = CardinalityMode::ExactOracle);

  // user-file mode: JSON object mapping "alias1,alias2,..." (query order) to counts.
  // Missing entries fall back to the independence estimate.
  static CardinalitySource from_file(const Catalog& catalog, const QuerySpec& query, const std::string& path);

  CardinalityMode mode() const { return mode_; }
  double cardinality(AliasSet set);
  std::string key(AliasSet set) const;

 private:
  double estimate(AliasSet set);
  double distinct_count(const ColumnRef& col);

  const Catalog& catalog_;
  const QuerySpec& query_;
  CardinalityMode mode_;
  std::unordered_map<AliasSet, double> memo_;
  std::map<std::string, double> user_;
  std::map<ColumnRef, double> ndv_;
};

}  // namespace predjoin
