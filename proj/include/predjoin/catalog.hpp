#pragma once

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "predjoin/ridindex.hpp"
#include "predjoin/ridmat.hpp"
#include "predjoin/storage.hpp"

namespace predjoin {

class Catalog {
 public:
  Catalog() = default;
  Catalog(Catalog&&) = default;
  Catalog& operator=(Catalog&&) = default;

  // Errors: DuplicateTable, DuplicateColumn.
  Table& create_table(const std::string& name, std::vector<ColumnDef> schema);

  Table* find_table(const std::string& name);
  const Table* find_table(const std::string& name) const;
  // Throws UnknownTable.
  Table& table(const std::string& name);
  const Table& table(const std::string& name) const;
  // Creation order.
  const std::vector<std::string>& table_names() const { return order_; }

  const std::deque<PredefinedJoin>& predefined_joins() const { return joins_; }
  const PredefinedJoin& join(int id) const { return joins_.at(static_cast<std::size_t>(id)); }
  const PredefinedJoin* find_join(const std::string& from_table,
                                  const std::vector<std::string>& from_cols,
                                  const std::string& to_table) const;
  const PredefinedJoin* find_join(const std::string& from_table,
                                  const std::vector<std::string>& from_cols) const;
  const PredefinedJoin& add_join(PredefinedJoin join);

  const std::deque<RidIndex>& rid_indices() const { return rid_indices_; }
  const std::deque<ExtendedRidIndex>& extended_indices() const { return extended_indices_; }
  const RidIndex* find_rid_index(int join_id) const;
  const ExtendedRidIndex* find_extended_index(int near_join_id, int far_join_id) const;
  const RidIndex& add_rid_index(RidIndex index);
  const ExtendedRidIndex& add_extended_index(ExtendedRidIndex index);

 private:
  std::map<std::string, std::unique_ptr<Table>> tables_;
  std::vector<std::string> order_;
  std::deque<PredefinedJoin> joins_;
  std::deque<RidIndex> rid_indices_;
  std::deque<ExtendedRidIndex> extended_indices_;
};

}  // namespace predjoin
