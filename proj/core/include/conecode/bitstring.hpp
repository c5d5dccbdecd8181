#pragma once

// Finite binary strings up to 64 bits, stored as (value, length) with the
// first bit in the most significant position of the value.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "conecode/dyadic.hpp"
#include "conecode/errors.hpp"

namespace conecode {

class BitString {
 public:
  static constexpr int kMaxBits = 64;

  BitString() = default;  // the empty string
  BitString(uint64_t value, int length) : bits_(value), len_(length) {
    if (length < 0 || length > kMaxBits)
      fail(Errc::precision_exceeded,
           "bit string length out of range: " + std::to_string(length));
    if (length < kMaxBits && (value >> length) != 0)
      fail(Errc::invalid_input, "bit string value wider than its length");
  }

  static BitString parse(std::string_view s);

  int length() const { return len_; }
  bool empty() const { return len_ == 0; }
  uint64_t value() const { return bits_; }

  int bit(int i) const {
    if (i < 0 || i >= len_) fail(Errc::invalid_input, "bit index out of range");
    return int((bits_ >> (len_ - 1 - i)) & 1);
  }

  BitString appended(int b) const {
    if (len_ == kMaxBits) fail(Errc::precision_exceeded, "bit string full");
    return BitString((bits_ << 1) | uint64_t(b & 1), len_ + 1);
  }

  BitString prefix(int n) const {
    if (n < 0 || n > len_) fail(Errc::invalid_input, "prefix length out of range");
    return BitString(n == 0 ? 0 : bits_ >> (len_ - n), n);
  }

  // this followed by tail
  BitString extended(const BitString& tail) const {
    if (len_ + tail.len_ > kMaxBits)
      fail(Errc::precision_exceeded, "bit string concatenation too long");
    return BitString((bits_ << tail.len_) | tail.bits_, len_ + tail.len_);
  }

  bool is_prefix_of(const BitString& y) const {
    if (len_ > y.len_) return false;
    return y.prefix(len_).bits_ == bits_;
  }

  // Key for padded comparison: leading bits aligned to a fixed width, so
  // cones sort by their left endpoint.
  u128 padded_key() const { return u128(bits_) << (kMaxBits - len_); }

  // Lexicographic order: padded position first, then length, so a prefix
  // sorts immediately before its extensions.
  std::strong_ordering operator<=>(const BitString& o) const {
    if (auto c = padded_key() <=> o.padded_key(); c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return len_ <=> o.len_;
  }
  bool operator==(const BitString& o) const = default;

  std::string str() const {
    std::string out;
    out.reserve(size_t(len_));
    for (int i = 0; i < len_; ++i) out.push_back(char('0' + bit(i)));
    return out;
  }

 private:
  uint64_t bits_ = 0;
  int len_ = 0;
};

}  // namespace conecode
