#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace predjoin {

using Rid = std::int64_t;

enum class DataType { Int64, Str, Date };

const char* to_string(DataType type);

// Dates are stored as days since 1970-01-01, so Int64 and Date share a representation.
using Value = std::variant<std::int64_t, std::string>;

inline bool is_integral(DataType type) { return type != DataType::Str; }

// Strict ISO-8601 calendar date (YYYY-MM-DD).
std::optional<std::int64_t> parse_date(std::string_view text);
std::string format_date(std::int64_t days);

std::optional<std::int64_t> parse_int64(std::string_view text);

// Parses one textual field under `type`; nullopt when it does not conform.
std::optional<Value> parse_value(std::string_view text, DataType type);

// Rendering used by CSV output: dates come out as ISO strings.
std::string render_value(const Value& value, DataType type);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(CmpOp op);

template <typename T>
bool compare(const T& lhs, CmpOp op, const T& rhs) {
  switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
  }
  return false;
}

bool compare_values(const Value& lhs, CmpOp op, const Value& rhs);

}  // namespace predjoin
