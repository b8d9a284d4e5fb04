#include "predjoin/storage.hpp"

#include <istream>
#include <ostream>
#include <unordered_set>

#include "predjoin/error.hpp"

namespace predjoin {

Table::Table(std::string name, std::vector<ColumnDef> schema) : name_(std::move(name)), defs_(std::move(schema)) {
  std::unordered_set<std::string> seen;
  for (const auto& def : defs_) {
    if (!seen.insert(def.name).second)
      fail(ErrorKind::DuplicateColumn, name_ + "." + def.name);
    if (def.type == DataType::Str)
      data_.emplace_back(std::vector<std::string>{});
    else
      data_.emplace_back(std::vector<std::int64_t>{});
  }
}

std::size_t Table::user_column_count() const {
  std::size_t n = 0;
  for (const auto& def : defs_) n += def.visibility == Visibility::User;
  return n;
}

std::optional<std::size_t> Table::find_column(std::string_view column) const {
  for (std::size_t i = 0; i < defs_.size(); ++i)
    if (defs_[i].name == column) return i;
  return std::nullopt;
}

std::optional<std::size_t> Table::find_user_column(std::string_view column) const {
  auto idx = find_column(column);
  if (idx && defs_[*idx].visibility != Visibility::User) return std::nullopt;
  return idx;
}

std::size_t Table::column_index(std::string_view column) const {
  if (auto idx = find_column(column)) return *idx;
  fail(ErrorKind::UnknownColumn, name_ + "." + std::string(column));
}

std::span<const std::int64_t> Table::ints(std::size_t col) const {
  return std::get<std::vector<std::int64_t>>(data_.at(col));
}

std::span<const std::string> Table::strings(std::size_t col) const {
  return std::get<std::vector<std::string>>(data_.at(col));
}

Value Table::value(std::size_t col, std::size_t row) const {
  if (defs_.at(col).type == DataType::Str) return strings(col)[row];
  return ints(col)[row];
}

Vector Table::read(std::size_t col, std::size_t begin, std::size_t len) const {
  if (defs_.at(col).type == DataType::Str) {
    auto src = strings(col).subspan(begin, len);
    return Vector::strings({src.begin(), src.end()});
  }
  auto src = ints(col).subspan(begin, len);
  return Vector::ints({src.begin(), src.end()});
}

void Table::append_row(std::vector<Value> values) {
  if (frozen_)
    fail(ErrorKind::UnsupportedFeature, "table " + name_ + " is referenced by a predefined join and can no longer be loaded");
  std::size_t v = 0;
  for (std::size_t c = 0; c < defs_.size(); ++c) {
    if (defs_[c].visibility != Visibility::User) continue;
    if (v >= values.size()) fail(ErrorKind::ArityMismatch, "too few values for " + name_);
    auto& value = values[v++];
    if (defs_[c].type == DataType::Str)
      std::get<std::vector<std::string>>(data_[c]).push_back(std::move(std::get<std::string>(value)));
    else
      std::get<std::vector<std::int64_t>>(data_[c]).push_back(std::get<std::int64_t>(value));
  }
  if (v != values.size()) fail(ErrorKind::ArityMismatch, "too many values for " + name_);
  ++row_count_;
}

void Table::add_hidden_rid_column(std::string column, std::vector<std::int64_t> values) {
  if (find_column(column)) fail(ErrorKind::DuplicateColumn, name_ + "." + column);
  PREDJOIN_CHECK(values.size() == row_count_, "rid column length mismatch");
  defs_.push_back(ColumnDef{std::move(column), DataType::Int64, Visibility::HiddenRid});
  data_.emplace_back(std::move(values));
}

ZoneScan scan_zone(const Table& table, std::size_t zone_index, std::span<const std::string> columns,
                   const ZoneConfig& zones) {
  const std::size_t zone_count = zones.zone_count(table.row_count());
  if (zone_index >= zone_count)
    fail(ErrorKind::ZoneOutOfRange, table.name() + " zone " + std::to_string(zone_index) + " of " +
                                        std::to_string(zone_count));
  const std::size_t begin = zones.zone_begin(zone_index);
  const std::size_t len = zones.zone_length(zone_index, table.row_count());
  ZoneScan out;
  out.columns.reserve(columns.size());
  for (const auto& column : columns) out.columns.push_back(table.read(table.column_index(column), begin, len));
  out.rids.resize(len);
  for (std::size_t i = 0; i < len; ++i) out.rids[i] = static_cast<Rid>(begin + i);
  return out;
}

namespace {

// Reads one CSV record; returns false at end of input. `line` is advanced past the record.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  const std::size_t start_line = line;
  for (;; c = in.get()) {
    if (quoted) {
      if (c == EOF) throw CsvParseError(start_line, fields.size() + 1, "unterminated quoted field");
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    if (c == EOF || c == '\n') {
      if (!field.empty() && field.back() == '\r' && !field_was_quoted) field.pop_back();
      fields.push_back(std::move(field));
      ++line;
      return true;
    }
    if (c == '\r' && (in.peek() == '\n' || in.peek() == EOF)) continue;
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else {
      if (field_was_quoted)
        throw CsvParseError(start_line, fields.size() + 1, "text after closing quote");
      field.push_back(static_cast<char>(c));
    }
  }
}

}  // namespace

std::size_t load_csv(Table& table, std::istream& source, bool header) {
  std::vector<const ColumnDef*> user;
  for (const auto& def : table.columns())
    if (def.visibility == Visibility::User) user.push_back(&def);

  // Parse everything first so a failure leaves the table untouched.
  std::vector<std::vector<Value>> rows;
  std::vector<std::string> fields;
  std::size_t line = 1;
  bool skip = header;
  for (;;) {
    const std::size_t record_line = line;
    if (!read_record(source, fields, line)) break;
    if (skip) {
      skip = false;
      continue;
    }
    if (fields.size() == 1 && fields[0].empty() && user.size() != 1) continue;  // blank line
    if (fields.size() != user.size())
      fail(ErrorKind::ArityMismatch, "line " + std::to_string(record_line) + ": expected " +
                                         std::to_string(user.size()) + " fields, found " +
                                         std::to_string(fields.size()));
    std::vector<Value> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      auto v = parse_value(fields[i], user[i]->type);
      if (!v)
        throw CsvParseError(record_line, i + 1,
                            "'" + fields[i] + "' is not a valid " + to_string(user[i]->type));
      row.push_back(std::move(*v));
    }
    rows.push_back(std::move(row));
  }
  for (auto& row : rows) table.append_row(std::move(row));
  return rows.size();
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_csv(const Table& table, std::ostream& out, bool header) {
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < table.columns().size(); ++c)
    if (table.columns()[c].visibility == Visibility::User) cols.push_back(c);
  if (header) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      out << (i ? "," : "") << csv_escape(table.columns()[cols[i]].name);
    out << '\n';
  }
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto& def = table.columns()[cols[i]];
      out << (i ? "," : "") << csv_escape(render_value(table.value(cols[i], r), def.type));
    }
    out << '\n';
  }
}

}  // namespace predjoin
