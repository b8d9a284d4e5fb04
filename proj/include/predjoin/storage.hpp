#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "predjoin/chunk.hpp"
#include "predjoin/value.hpp"

namespace predjoin {

enum class Visibility { User, HiddenRid };

struct ColumnDef {
  std::string name;
  DataType type = DataType::Int64;
  Visibility visibility = Visibility::User;
};

struct ZoneConfig {
  std::size_t zone_size = 1024;

  std::size_t zone_count(std::size_t rows) const { return (rows + zone_size - 1) / zone_size; }
  std::size_t zone_of(std::size_t row) const { return row / zone_size; }
  std::size_t zone_begin(std::size_t zone) const { return zone * zone_size; }
  std::size_t zone_length(std::size_t zone, std::size_t rows) const {
    const std::size_t begin = zone_begin(zone);
    return begin >= rows ? 0 : std::min(zone_size, rows - begin);
  }
};

using ColumnData = std::variant<std::vector<std::int64_t>, std::vector<std::string>>;

// Columnar table. A row's RID is its position; RIDs are never stored for user columns.
class Table {
 public:
  Table(std::string name, std::vector<ColumnDef> schema);

  const std::string& name() const { return name_; }
  std::size_t row_count() const { return row_count_; }
  const std::vector<ColumnDef>& columns() const { return defs_; }
  std::size_t user_column_count() const;

  std::optional<std::size_t> find_column(std::string_view column) const;
  std::optional<std::size_t> find_user_column(std::string_view column) const;
  // Throws UnknownColumn.
  std::size_t column_index(std::string_view column) const;

  std::span<const std::int64_t> ints(std::size_t col) const;
  std::span<const std::string> strings(std::size_t col) const;
  Value value(std::size_t col, std::size_t row) const;

  // Copies rows [begin, begin + len) of one column.
  Vector read(std::size_t col, std::size_t begin, std::size_t len) const;

  // Values for user columns, in schema order.
  void append_row(std::vector<Value> values);
  void add_hidden_rid_column(std::string column, std::vector<std::int64_t> values);

  // Once a predefined join references the table, appends would invalidate RIDs.
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  std::string name_;
  std::vector<ColumnDef> defs_;
  std::vector<ColumnData> data_;
  std::size_t row_count_ = 0;
  bool frozen_ = false;
};

// Output of scan_zone: one vector per requested column plus the positional RIDs.
struct ZoneScan {
  std::vector<Vector> columns;
  std::vector<Rid> rids;

  std::size_t size() const { return rids.size(); }
};

// Throws ZoneOutOfRange.
ZoneScan scan_zone(const Table& table, std::size_t zone_index,
                   std::span<const std::string> columns, const ZoneConfig& zones);

// RFC-4180-style CSV (comma, optional double quotes). Returns rows appended.
std::size_t load_csv(Table& table, std::istream& source, bool header);

// Inverse of load_csv for user columns; used for data dumps.
void write_csv(const Table& table, std::ostream& out, bool header = true);

}  // namespace predjoin
