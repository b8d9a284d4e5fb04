#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "predjoin/bitset.hpp"
#include "predjoin/value.hpp"

namespace predjoin {

// One column of values inside a chunk. Int64 and Date share the integer payload.
struct Vector {
  std::variant<std::vector<std::int64_t>, std::vector<std::string>> data;

  static Vector ints(std::vector<std::int64_t> v = {}) { return Vector{std::move(v)}; }
  static Vector strings(std::vector<std::string> v = {}) { return Vector{std::move(v)}; }
  static Vector of(DataType type) { return type == DataType::Str ? strings() : ints(); }

  bool is_int() const { return data.index() == 0; }
  const std::vector<std::int64_t>& as_ints() const { return std::get<0>(data); }
  std::vector<std::int64_t>& as_ints() { return std::get<0>(data); }
  const std::vector<std::string>& as_strings() const { return std::get<1>(data); }
  std::vector<std::string>& as_strings() { return std::get<1>(data); }

  std::size_t size() const {
    return std::visit([](const auto& v) { return v.size(); }, data);
  }
  Value at(std::size_t i) const {
    if (is_int()) return as_ints()[i];
    return as_strings()[i];
  }
  void push_from(const Vector& src, std::size_t i) {
    if (is_int())
      as_ints().push_back(src.as_ints()[i]);
    else
      as_strings().push_back(src.as_strings()[i]);
  }
  void reserve(std::size_t n) {
    std::visit([n](auto& v) { v.reserve(n); }, data);
  }
};

// A batch of rows flowing between operators. `selection` marks surviving positions;
// consumers must skip unselected rows.
struct DataChunk {
  std::vector<Vector> columns;
  Bitset selection;

  std::size_t size() const { return selection.size(); }
  std::size_t selected() const { return selection.count(); }
};

}  // namespace predjoin
