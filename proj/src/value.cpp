#include "predjoin/value.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "predjoin/error.hpp"

namespace predjoin {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateTable: return "DuplicateTable";
    case ErrorKind::DuplicateColumn: return "DuplicateColumn";
    case ErrorKind::UnknownTable: return "UnknownTable";
    case ErrorKind::UnknownColumn: return "UnknownColumn";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::ZoneOutOfRange: return "ZoneOutOfRange";
    case ErrorKind::NotAKey: return "NotAKey";
    case ErrorKind::DanglingForeignKey: return "DanglingForeignKey";
    case ErrorKind::AlreadyPredefined: return "AlreadyPredefined";
    case ErrorKind::NotPredefined: return "NotPredefined";
    case ErrorKind::AlreadyIndexed: return "AlreadyIndexed";
    case ErrorKind::JoinsOnDifferentTables: return "JoinsOnDifferentTables";
    case ErrorKind::RidOutOfRange: return "RidOutOfRange";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ResolutionError: return "ResolutionError";
    case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::DisconnectedJoinGraph: return "DisconnectedJoinGraph";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

const char* to_string(DataType type) {
  switch (type) {
    case DataType::Int64: return "INTEGER";
    case DataType::Str: return "VARCHAR";
    case DataType::Date: return "DATE";
  }
  return "?";
}

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "<>";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::optional<std::int64_t> parse_int64(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t out = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (text.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return out;
}

std::optional<std::int64_t> parse_date(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = parse_int64(text.substr(0, 4));
  auto m = parse_int64(text.substr(5, 2));
  auto d = parse_int64(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const year_month_day ymd{year{static_cast<int>(*y)}, month{static_cast<unsigned>(*m)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd}.time_since_epoch().count();
}

std::string format_date(std::int64_t days) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<Value> parse_value(std::string_view text, DataType type) {
  switch (type) {
    case DataType::Int64:
      if (auto v = parse_int64(text)) return Value{*v};
      return std::nullopt;
    case DataType::Date:
      if (auto v = parse_date(text)) return Value{*v};
      return std::nullopt;
    case DataType::Str:
      return Value{std::string(text)};
  }
  return std::nullopt;
}

std::string render_value(const Value& value, DataType type) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  const auto v = std::get<std::int64_t>(value);
  return type == DataType::Date ? format_date(v) : std::to_string(v);
}

bool compare_values(const Value& lhs, CmpOp op, const Value& rhs) {
  if (lhs.index() != rhs.index()) fail(ErrorKind::Internal, "comparing values of different types");
  if (lhs.index() == 0) return compare(std::get<0>(lhs), op, std::get<0>(rhs));
  return compare(std::get<1>(lhs), op, std::get<1>(rhs));
}

}  // namespace predjoin
