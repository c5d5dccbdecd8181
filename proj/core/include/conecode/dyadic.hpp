#pragma once

// Exact nonnegative binary fractions m * 2^-e. No floating point anywhere:
// every operation either returns the exact value or fails loudly.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "conecode/errors.hpp"

namespace conecode {

using u128 = unsigned __int128;

// Stored exponents are capped; values whose exponent cannot be brought under
// the cap by stripping common factors of two raise PrecisionExceeded.
inline constexpr int kMaxExponent = 64;

class Dyadic {
 public:
  Dyadic() = default;  // zero
  Dyadic(u128 numerator, int exponent);

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1, 0); }
  // 2^-e
  static Dyadic two_to_minus(int e) { return Dyadic(1, e); }

  u128 numerator() const { return num_; }
  int exponent() const { return exp_; }
  bool is_zero() const { return num_ == 0; }

  Dyadic operator+(const Dyadic& o) const;
  // Exact subtraction; the result must be nonnegative.
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;
  Dyadic halved() const;

  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }

  std::strong_ordering operator<=>(const Dyadic& o) const;
  bool operator==(const Dyadic& o) const {
    return (*this <=> o) == std::strong_ordering::equal;
  }

  // Largest multiple of 2^-grid_bits strictly below this value. Steps down a
  // full grid cell when the value is already on the grid. Requires value > 0.
  Dyadic floor_strict(int grid_bits) const;

  // True iff value * 2^grid_bits is an integer.
  bool on_grid(int grid_bits) const;
  // Minimal e' such that the value lies on the 2^-e' grid (0 for zero).
  int fractional_bits() const;
  // Smallest k >= 0 with value >= 2^-k. Requires 0 < value <= 1.
  int neg_log2_ceil() const;

  // Rendered as "m/2^e" with m in decimal, exactly as stored.
  std::string str() const;
  // Accepts "m/2^e" or a bare nonnegative integer.
  static Dyadic parse(std::string_view s);

 private:
  u128 num_ = 0;
  int exp_ = 0;

  // Strip common factors of two until the exponent and numerator fit their
  // bounds; throws PrecisionExceeded if that is impossible.
  void reduce_to_bounds();
};

}  // namespace conecode
