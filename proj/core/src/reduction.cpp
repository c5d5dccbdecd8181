#include "conecode/reduction.hpp"

#include <algorithm>
#include <string>

namespace conecode {

namespace {

int bit_length64(uint64_t v) {
  int n = 0;
  while (v != 0) {
    ++n;
    v >>= 1;
  }
  return n;
}

}  // namespace

BitString encode(const Allocation& a, const BitString& target) {
  const auto& s = a.stems(target);
  if (s.empty())
    fail(Errc::not_covered, "no cones allocated to target " +
                                (target.empty() ? std::string("-") : target.str()));
  return BitString(s.front(), a.schedule().at(target));
}

DecodeResult decode(const Allocation& a, const BitString& code, int n) {
  if (n < 0 || n > a.depth())
    fail(Errc::depth_exceeded, "decode length outside 0..depth");
  BitString full = a.apply_map(code);
  if (full.length() >= n) return DecodeResult{full.prefix(n), n, true};
  return DecodeResult{full, full.length(), false};
}

CodeStream::CodeStream(const Allocation& a) : alloc_(&a) { recommit(); }

void CodeStream::recommit() {
  const auto& s = alloc_->stems(target_);
  int g = alloc_->schedule().at(target_);
  // The stems are sorted, so the common prefix of all of them is the common
  // prefix of the first and last.
  uint64_t first = s.front(), last = s.back();
  int common = g - bit_length64(first ^ last);
  BitString next(common == 0 ? 0 : first >> (g - common), common);
  if (!committed_.is_prefix_of(next))
    fail(Errc::internal_invariant_broken, "committed bits stopped being a prefix");
  committed_ = next;
}

BitString CodeStream::push_target_bit(int b) {
  if (finalized_) fail(Errc::stream_finalized, "stream already finalized");
  BitString extended = target_.appended(b);
  if (alloc_->stems(extended).empty())
    fail(Errc::not_covered, "zero-mass target extension " + extended.str());
  int before = committed_.length();
  target_ = extended;
  recommit();
  BitString fresh;
  for (int i = before; i < committed_.length(); ++i)
    fresh = fresh.appended(committed_.bit(i));
  return fresh;
}

BitString CodeStream::finalize() {
  if (finalized_) fail(Errc::stream_finalized, "stream already finalized");
  finalized_ = true;
  BitString code = encode(*alloc_, target_);
  if (!committed_.is_prefix_of(code))
    fail(Errc::internal_invariant_broken, "finalize lost the committed prefix");
  committed_ = code;
  return code;
}

TestAssignment::TestAssignment(int leaf_bits, std::vector<Dyadic> values,
                               bool check_mean)
    : leaf_bits_(leaf_bits), values_(std::move(values)) {
  if (leaf_bits < 1 || leaf_bits > 22)
    fail(Errc::precision_exceeded, "test assignment depth outside 1..22");
  if (values_.size() != (size_t(1) << leaf_bits))
    fail(Errc::invalid_input, "test assignment must cover every leaf");
  if (check_mean && mean() > Dyadic::one())
    fail(Errc::invalid_input, "test assignment mean exceeds 1");
}

Dyadic TestAssignment::mean() const {
  Dyadic sum;
  for (const auto& v : values_) sum += v;
  return sum * Dyadic::two_to_minus(leaf_bits_);
}

PreimageMass preimage_mass(const Allocation& a, const BitString& x,
                           const TestAssignment& t) {
  if (t.leaf_bits() != a.schedule().max_granularity())
    fail(Errc::invalid_input,
         "test assignment depth does not match the allocation's finest grid");
  const auto& stems = a.stems(x);
  int g = a.schedule().at(x);
  int L = t.leaf_bits();
  Dyadic sum;
  for (uint64_t stem : stems) {
    uint64_t lo = stem << (L - g);
    uint64_t hi = lo + (uint64_t(1) << (L - g));
    for (uint64_t leaf = lo; leaf < hi; ++leaf) sum += t.at(leaf);
  }
  return PreimageMass{sum * Dyadic::two_to_minus(L),
                      Dyadic(u128(stems.size()), g)};
}

WitnessLeaf find_low_test_preimage(const Allocation& a, const BitString& x,
                                   const TestAssignment& t, const Dyadic& C) {
  if (t.leaf_bits() != a.schedule().max_granularity())
    fail(Errc::invalid_input,
         "test assignment depth does not match the allocation's finest grid");
  const auto& stems = a.stems(x);
  if (stems.empty())
    fail(Errc::not_covered, "empty preimage for " +
                                (x.empty() ? std::string("-") : x.str()));
  int g = a.schedule().at(x);
  int L = t.leaf_bits();
  Dyadic sum;
  bool have_min = false;
  uint64_t min_leaf = 0;
  Dyadic min_value;
  for (uint64_t stem : stems) {
    uint64_t lo = stem << (L - g);
    uint64_t hi = lo + (uint64_t(1) << (L - g));
    for (uint64_t leaf = lo; leaf < hi; ++leaf) {
      const Dyadic& v = t.at(leaf);
      sum += v;
      if (!have_min || v < min_value) {
        have_min = true;
        min_leaf = leaf;
        min_value = v;
      }
    }
  }
  Dyadic test_mass = sum * Dyadic::two_to_minus(L);
  Dyadic space_mass(u128(stems.size()), g);
  if (test_mass > C * space_mass)
    fail(Errc::bound_violated,
         "test mass " + test_mass.str() + " exceeds bound * space mass " +
             (C * space_mass).str() + " at " +
             (x.empty() ? std::string("-") : x.str()));
  if (min_value > C)
    fail(Errc::internal_invariant_broken, "averaging bound failed to produce a witness");
  return WitnessLeaf{Cone{BitString(min_leaf, L)}, min_value};
}

Dyadic dyadic_upper_ratio(const Dyadic& num, const Dyadic& den, int grid_bits) {
  if (den.is_zero()) fail(Errc::non_positive, "ratio with zero denominator");
  if (grid_bits < 0 || grid_bits > kMaxExponent)
    fail(Errc::invalid_input, "ratio grid outside exponent bounds");
  if (num.is_zero()) return Dyadic();
  // ceil(num * 2^grid / den) with num = a*2^-ea, den = b*2^-eb:
  // ceil(a * 2^(grid - ea + eb) / b).
  u128 a = num.numerator(), b = den.numerator();
  int s = grid_bits - num.exponent() + den.exponent();
  while (s > 0 && (a >> 120) == 0) {
    a <<= 1;
    --s;
  }
  while (s < 0 && (b >> 120) == 0) {
    b <<= 1;
    ++s;
  }
  if (s != 0) fail(Errc::precision_exceeded, "ratio scaling overflow");
  u128 k = (a + b - 1) / b;
  return Dyadic(k, grid_bits);
}

WitnessChain verify_nested_witnesses(const Allocation& a, const BitString& alpha,
                                     const TestAssignment& t, const Dyadic& C) {
  WitnessChain chain;
  for (int i = 0; i <= alpha.length(); ++i) {
    BitString prefix = alpha.prefix(i);
    PreimageMass mass = preimage_mass(a, prefix, t);
    WitnessLeaf w = find_low_test_preimage(a, prefix, t, C);
    chain.entries.push_back({prefix, w, mass.test_mass, mass.space_mass});
  }
  chain.omega_star = chain.entries.back().witness;
  return chain;
}

}  // namespace conecode
