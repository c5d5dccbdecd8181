#pragma once

// Prefix-monotone compression through an allocation, and the finite-depth
// averaging argument: a low-test input exists in every preimage whose
// measure-weighted test mass is small relative to its size.

#include <cstdint>
#include <vector>

#include "conecode/allocator.hpp"
#include "conecode/bitstring.hpp"
#include "conecode/cone.hpp"
#include "conecode/dyadic.hpp"

namespace conecode {

// Lexicographically least stem of preimage(target); its length is exactly
// g(|target|) and apply_map inverts it back to target.
BitString encode(const Allocation& a, const BitString& target);

struct DecodeResult {
  BitString output;         // first min(n, determined) bits
  int determined_depth;     // deepest covered prefix length
  bool complete;            // determined_depth >= requested n
};

// First n bits of apply_map(code); reports how deep the code's cone is
// covered when that is less than n.
DecodeResult decode(const Allocation& a, const BitString& code, int n);

// Bit-by-bit encoder. Feeding target bits narrows the candidate cone set to
// the preimage of the current prefix; bits are committed as soon as every
// candidate stem agrees on them.
class CodeStream {
 public:
  explicit CodeStream(const Allocation& a);

  // Extends the target by one bit; returns the newly committed code bits.
  BitString push_target_bit(int b);
  // Commits the least candidate stem in full and closes the stream.
  BitString finalize();

  const BitString& target() const { return target_; }
  const BitString& committed() const { return committed_; }
  bool finalized() const { return finalized_; }

 private:
  void recommit();

  const Allocation* alloc_;
  BitString target_;
  BitString committed_;
  bool finalized_ = false;
};

// Nonnegative dyadic value per leaf cone of the allocation's finest
// granularity; the finite stand-in for an expectation-bounded test.
class TestAssignment {
 public:
  // Requires mean = 2^-leaf_bits * sum(values) <= 1 unless check_mean is off.
  TestAssignment(int leaf_bits, std::vector<Dyadic> values, bool check_mean = true);

  int leaf_bits() const { return leaf_bits_; }
  const Dyadic& at(uint64_t leaf) const { return values_[leaf]; }
  size_t leaf_count() const { return values_.size(); }
  Dyadic mean() const;

 private:
  int leaf_bits_ = 0;
  std::vector<Dyadic> values_;
};

struct WitnessLeaf {
  Cone leaf;
  Dyadic value;
};

// tau(U) = sum over leaves of U of 2^-leaf_bits * t(leaf), P(U) = total cone
// measure of U = preimage(x).
struct PreimageMass {
  Dyadic test_mass;   // tau(U)
  Dyadic space_mass;  // P(U)
};
PreimageMass preimage_mass(const Allocation& a, const BitString& x,
                           const TestAssignment& t);

// Requires tau(U) <= C * P(U); then the minimum of t over U is <= C and the
// minimizing leaf (ties to the lexicographically least) is returned.
// Violated hypothesis raises BoundViolated; empty preimage raises NotCovered.
WitnessLeaf find_low_test_preimage(const Allocation& a, const BitString& x,
                                   const TestAssignment& t, const Dyadic& C);

struct WitnessChain {
  struct Entry {
    BitString prefix;
    WitnessLeaf witness;
    // Exact masses whose ratio tau(U)/P(U) is the tight achievable bound.
    Dyadic test_mass;
    Dyadic space_mass;
  };
  std::vector<Entry> entries;  // one per prefix of alpha, shortest first
  WitnessLeaf omega_star;      // single witness for the full alpha
};

// Least multiple of 2^-grid_bits that is >= num/den; den must be positive.
// Used to pick exact dyadic bounds C with tau <= C * P.
Dyadic dyadic_upper_ratio(const Dyadic& num, const Dyadic& den, int grid_bits);

// Per-prefix witnesses plus one full-depth witness valid for every prefix at
// once (the finite stand-in for the compactness limit point).
WitnessChain verify_nested_witnesses(const Allocation& a, const BitString& alpha,
                                     const TestAssignment& t, const Dyadic& C);

}  // namespace conecode
