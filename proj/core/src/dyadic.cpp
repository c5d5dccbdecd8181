#include "conecode/dyadic.hpp"

#include <algorithm>

namespace conecode {

namespace {

// Numerators are kept below 2^120 so that alignment shifts have headroom.
constexpr int kMaxNumeratorBits = 120;

int bit_length(u128 v) {
  int n = 0;
  while (v != 0) {
    ++n;
    v >>= 1;
  }
  return n;
}

int trailing_zeros(u128 v) {
  int n = 0;
  while ((v & 1) == 0) {
    ++n;
    v >>= 1;
  }
  return n;
}

u128 fully_reduced(u128 num, int& exp) {
  if (num == 0) {
    exp = 0;
    return 0;
  }
  int tz = std::min(trailing_zeros(num), exp);
  exp -= tz;
  return num >> tz;
}

}  // namespace

Dyadic::Dyadic(u128 numerator, int exponent) : num_(numerator), exp_(exponent) {
  if (exponent < 0) fail(Errc::invalid_input, "negative dyadic exponent");
  reduce_to_bounds();
}

void Dyadic::reduce_to_bounds() {
  if (num_ == 0) return;
  while ((exp_ > kMaxExponent || bit_length(num_) > kMaxNumeratorBits) &&
         (num_ & 1) == 0 && exp_ > 0) {
    num_ >>= 1;
    --exp_;
  }
  if (exp_ > kMaxExponent)
    fail(Errc::precision_exceeded, "dyadic exponent exceeds " +
                                       std::to_string(kMaxExponent));
  if (bit_length(num_) > kMaxNumeratorBits)
    fail(Errc::precision_exceeded, "dyadic numerator out of range");
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  u128 a = num_, b = o.num_;
  int ea = exp_, eb = o.exp_;
  int e = std::max(ea, eb);
  if (std::max(bit_length(a) + (e - ea), bit_length(b) + (e - eb)) >= 127) {
    a = fully_reduced(a, ea);
    b = fully_reduced(b, eb);
    e = std::max(ea, eb);
    if (std::max(bit_length(a) + (e - ea), bit_length(b) + (e - eb)) >= 127)
      fail(Errc::precision_exceeded, "dyadic addition overflow");
  }
  return Dyadic((a << (e - ea)) + (b << (e - eb)), e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const {
  u128 a = num_, b = o.num_;
  int ea = exp_, eb = o.exp_;
  int e = std::max(ea, eb);
  if (std::max(bit_length(a) + (e - ea), bit_length(b) + (e - eb)) >= 127) {
    a = fully_reduced(a, ea);
    b = fully_reduced(b, eb);
    e = std::max(ea, eb);
    if (std::max(bit_length(a) + (e - ea), bit_length(b) + (e - eb)) >= 127)
      fail(Errc::precision_exceeded, "dyadic subtraction overflow");
  }
  u128 av = a << (e - ea), bv = b << (e - eb);
  if (av < bv) fail(Errc::invalid_input, "dyadic subtraction went negative");
  return Dyadic(av - bv, e);
}

Dyadic Dyadic::operator*(const Dyadic& o) const {
  u128 a = num_, b = o.num_;
  int ea = exp_, eb = o.exp_;
  if (a == 0 || b == 0) return Dyadic();
  if (bit_length(a) + bit_length(b) > 127) {
    a = fully_reduced(a, ea);
    b = fully_reduced(b, eb);
    if (bit_length(a) + bit_length(b) > 127)
      fail(Errc::precision_exceeded, "dyadic multiplication overflow");
  }
  return Dyadic(a * b, ea + eb);
}

Dyadic Dyadic::halved() const {
  if (num_ == 0) return Dyadic();
  return Dyadic(num_, exp_ + 1);
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
  if (num_ == 0 && o.num_ == 0) return std::strong_ordering::equal;
  if (num_ == 0) return std::strong_ordering::less;
  if (o.num_ == 0) return std::strong_ordering::greater;
  u128 a = num_, b = o.num_;
  int ea = exp_, eb = o.exp_;
  int e = std::max(ea, eb);
  int la = bit_length(a) + (e - ea);
  int lb = bit_length(b) + (e - eb);
  if (la != lb) return la <=> lb;
  // Equal effective bit lengths: shifts fit because la == lb <= 127.
  u128 av = a << (e - ea), bv = b << (e - eb);
  if (av < bv) return std::strong_ordering::less;
  if (av > bv) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Dyadic Dyadic::floor_strict(int grid_bits) const {
  if (grid_bits < 0) fail(Errc::invalid_input, "negative grid");
  if (grid_bits > kMaxExponent)
    fail(Errc::precision_exceeded, "grid finer than exponent bound");
  if (num_ == 0) fail(Errc::non_positive, "floor_strict requires a positive value");
  u128 a = num_;
  int e = exp_;
  if (grid_bits >= e) {
    int shift = grid_bits - e;
    if (bit_length(a) + shift >= 127) {
      a = fully_reduced(a, e);
      shift = grid_bits - e;
      if (shift < 0 || bit_length(a) + shift >= 127)
        fail(Errc::precision_exceeded, "floor_strict overflow");
    }
    return Dyadic((a << shift) - 1, grid_bits);
  }
  return Dyadic((a - 1) >> (e - grid_bits), grid_bits);
}

bool Dyadic::on_grid(int grid_bits) const {
  if (num_ == 0) return true;
  if (grid_bits >= exp_) return true;
  int shift = exp_ - grid_bits;
  if (shift >= 128) return false;
  return (num_ & ((u128(1) << shift) - 1)) == 0;
}

int Dyadic::fractional_bits() const {
  if (num_ == 0) return 0;
  return std::max(0, exp_ - trailing_zeros(num_));
}

int Dyadic::neg_log2_ceil() const {
  if (num_ == 0) fail(Errc::non_positive, "neg_log2_ceil of zero");
  int bl = bit_length(num_);
  if (bl > exp_ + 1 || (bl == exp_ + 1 && num_ != (u128(1) << exp_)))
    fail(Errc::invalid_input, "neg_log2_ceil requires value <= 1");
  return exp_ - (bl - 1);
}

std::string Dyadic::str() const {
  u128 v = num_;
  std::string digits;
  do {
    digits.push_back(char('0' + int(v % 10)));
    v /= 10;
  } while (v != 0);
  std::reverse(digits.begin(), digits.end());
  return digits + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::parse(std::string_view s) {
  auto parse_u128 = [](std::string_view t) -> u128 {
    if (t.empty()) fail(Errc::parse_error, "empty number in dyadic");
    u128 v = 0;
    for (char c : t) {
      if (c < '0' || c > '9')
        fail(Errc::parse_error, "bad digit in dyadic: " + std::string(t));
      u128 next = v * 10 + u128(c - '0');
      if (next < v || bit_length(next) > kMaxNumeratorBits)
        fail(Errc::precision_exceeded, "dyadic numerator out of range");
      v = next;
    }
    return v;
  };
  auto pos = s.find('/');
  if (pos == std::string_view::npos) return Dyadic(parse_u128(s), 0);
  std::string_view den = s.substr(pos + 1);
  if (den.substr(0, 2) != "2^")
    fail(Errc::not_dyadic, "denominator must be a power of two: " + std::string(s));
  u128 e = parse_u128(den.substr(2));
  if (e > u128(kMaxExponent))
    fail(Errc::precision_exceeded, "dyadic exponent exceeds " +
                                       std::to_string(kMaxExponent));
  return Dyadic(parse_u128(s.substr(0, pos)), int(e));
}

}  // namespace conecode
