#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "predjoin/chunk.hpp"

namespace predjoin {

// Canonical byte encodings for composite keys: fixed 8 bytes per integer,
// length-prefixed bytes per string. Column order is significant.
inline void append_key(std::string& key, std::int64_t v) {
  char buf[sizeof v];
  std::memcpy(buf, &v, sizeof v);
  key.append(buf, sizeof v);
}

inline void append_key(std::string& key, std::string_view s) {
  append_key(key, static_cast<std::int64_t>(s.size()));
  key.append(s);
}

inline void append_key(std::string& key, const Vector& column, std::size_t row) {
  if (column.is_int())
    append_key(key, column.as_ints()[row]);
  else
    append_key(key, column.as_strings()[row]);
}

// RIDs are dense integers; mixing is enough to spread them over buckets.
struct RidHash {
  std::size_t operator()(std::int64_t v) const noexcept {
    auto x = static_cast<std::uint64_t>(v);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
  }
};

}  // namespace predjoin
