#pragma once

#include <span>
#include <string>
#include <vector>

#include "predjoin/value.hpp"

namespace predjoin {

class Catalog;

// A registered foreign-key equality join F(from_cols) -> P(to_cols) and the hidden
// column of F that stores, per F row, the RID of its matching P row.
struct PredefinedJoin {
  int id = -1;
  std::string from_table;
  std::vector<std::string> from_cols;
  std::string to_table;
  std::vector<std::string> to_cols;
  std::string rid_column;
};

// Name of the hidden column, e.g. "RID(ID1)". Not expressible as a SQL identifier.
std::string rid_column_name(const std::vector<std::string>& from_cols);

// Materializes the RID column on F and registers the join.
// Errors: UnknownTable, UnknownColumn, ArityMismatch, ResolutionError (type mismatch),
// NotAKey, DanglingForeignKey, AlreadyPredefined.
const PredefinedJoin& predefine_join(Catalog& catalog, const std::string& from_table,
                                     const std::vector<std::string>& from_cols,
                                     const std::string& to_table,
                                     const std::vector<std::string>& to_cols);

std::span<const Rid> rid_column_of(const Catalog& catalog, const PredefinedJoin& join);

}  // namespace predjoin
