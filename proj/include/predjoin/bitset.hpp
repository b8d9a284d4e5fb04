#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace predjoin {

// Dense fixed-length bitset; used for sip bitmasks and chunk selection vectors.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size, bool value = false)
      : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool any() const {
    for (auto w : words_)
      if (w != 0) return true;
    return false;
  }

  // Bits [begin, begin + len) as a new bitset.
  Bitset slice(std::size_t begin, std::size_t len) const {
    Bitset out(len);
    if (begin % 64 == 0) {
      const std::size_t first = begin / 64;
      for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] = words_[first + w];
      out.trim();
      return out;
    }
    for (std::size_t i = 0; i < len; ++i)
      if (test(begin + i)) out.set(i);
    return out;
  }

  // Whether any bit in [begin, end) is set.
  bool any_in(std::size_t begin, std::size_t end) const {
    end = std::min(end, size_);
    while (begin < end && begin % 64 != 0) {
      if (test(begin)) return true;
      ++begin;
    }
    for (; begin + 64 <= end; begin += 64)
      if (words_[begin >> 6] != 0) return true;
    for (; begin < end; ++begin)
      if (test(begin)) return true;
    return false;
  }

  Bitset& operator&=(const Bitset& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
  }
  Bitset& operator|=(const Bitset& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
  }

  bool operator==(const Bitset&) const = default;

  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        fn(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  // "0101"-style rendering, bit 0 first.
  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  std::vector<std::size_t> set_positions() const {
    std::vector<std::size_t> out;
    for_each_set([&](std::size_t i) { out.push_back(i); });
    return out;
  }

 private:
  void trim() {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace predjoin
