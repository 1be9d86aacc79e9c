#pragma once

// Fixed-width bit vector encoding a set of taxon indices. Bit i corresponds
// to index i of the LabelSpace that fixed the width. Comparison treats the
// vector as an integer where bit i has weight 2^i, so sort order is the
// numeric order of that integer.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phylotag {

class BitString {
 public:
  BitString() = default;

  explicit BitString(int n_bits)
      : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {
    if (n_bits <= 0) {
      throw std::invalid_argument("BitString width must be positive");
    }
  }

  static BitString singleton(int n_bits, int index) {
    BitString b(n_bits);
    b.set(index);
    return b;
  }

  static BitString all_ones(int n_bits) {
    BitString b(n_bits);
    for (int i = 0; i < n_bits; ++i) {
      b.set(i);
    }
    return b;
  }

  int size() const { return n_bits_; }

  bool test(int i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(int i) {
    check_index(i);
    words_[i >> 6] |= uint64_t(1) << (i & 63);
  }

  int popcount() const {
    int total = 0;
    for (uint64_t w : words_) {
      total += std::popcount(w);
    }
    return total;
  }

  bool any() const {
    for (uint64_t w : words_) {
      if (w != 0) return true;
    }
    return false;
  }

  BitString& operator|=(const BitString& other) {
    check_same_width(other);
    for (size_t i = 0; i < words_.size(); ++i) {
      words_[i] |= other.words_[i];
    }
    return *this;
  }

  friend BitString operator|(BitString a, const BitString& b) {
    a |= b;
    return a;
  }

  BitString& operator&=(const BitString& other) {
    check_same_width(other);
    for (size_t i = 0; i < words_.size(); ++i) {
      words_[i] &= other.words_[i];
    }
    return *this;
  }

  friend BitString operator&(BitString a, const BitString& b) {
    a &= b;
    return a;
  }

  // Bits set here and not in other.
  BitString and_not(const BitString& other) const {
    check_same_width(other);
    BitString out(n_bits_);
    for (size_t i = 0; i < words_.size(); ++i) {
      out.words_[i] = words_[i] & ~other.words_[i];
    }
    return out;
  }

  bool operator==(const BitString& other) const {
    return n_bits_ == other.n_bits_ && words_ == other.words_;
  }

  bool operator!=(const BitString& other) const { return !(*this == other); }

  // Numeric order: compare high words first.
  bool operator<(const BitString& other) const {
    check_same_width(other);
    for (size_t i = words_.size(); i-- > 0;) {
      if (words_[i] != other.words_[i]) {
        return words_[i] < other.words_[i];
      }
    }
    return false;
  }

  bool is_subset_of(const BitString& other) const {
    check_same_width(other);
    for (size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  bool is_strict_subset_of(const BitString& other) const {
    return is_subset_of(other) && *this != other;
  }

  bool intersects(const BitString& other) const {
    check_same_width(other);
    for (size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & other.words_[i]) return true;
    }
    return false;
  }

  // Byte at position i covers bits [8i, 8i+8).
  uint8_t byte(int i) const {
    return uint8_t(words_[i >> 3] >> ((i & 7) * 8));
  }

  int byte_width() const { return (n_bits_ + 7) / 8; }

  // "10110..." with bit 0 printed first.
  std::string to_string() const {
    std::string s;
    s.reserve(n_bits_);
    for (int i = 0; i < n_bits_; ++i) {
      s.push_back(test(i) ? '1' : '0');
    }
    return s;
  }

  // Two lowercase hex digits per byte, lowest byte first.
  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(2 * byte_width());
    for (int i = 0; i < byte_width(); ++i) {
      uint8_t b = byte(i);
      s.push_back(digits[b >> 4]);
      s.push_back(digits[b & 15]);
    }
    return s;
  }

  size_t hash() const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t w : words_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return size_t(h);
  }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= n_bits_) {
      throw std::out_of_range("BitString index out of range");
    }
  }

  void check_same_width(const BitString& other) const {
    if (n_bits_ != other.n_bits_) {
      throw std::invalid_argument("BitString width mismatch");
    }
  }

  int n_bits_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace phylotag

template <>
struct std::hash<phylotag::BitString> {
  size_t operator()(const phylotag::BitString& b) const { return b.hash(); }
};
