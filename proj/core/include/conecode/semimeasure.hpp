#pragma once

// Finite-depth semimeasure tables: a value for every string of length <= D,
// subject to value(x) >= value(x0) + value(x1) and value(empty) <= 1.

#include <cstddef>
#include <string>
#include <vector>

#include "conecode/bitstring.hpp"
#include "conecode/dyadic.hpp"

namespace conecode {

// Structural bound on table depth; the CLI applies the (smaller) configured
// maximum on top of this.
inline constexpr int kMaxTableDepth = 20;
inline constexpr int kDefaultMaxDepth = 16;

class SemimeasureTable {
 public:
  SemimeasureTable() = default;
  explicit SemimeasureTable(int depth);

  int depth() const { return depth_; }
  size_t node_count() const { return values_.size(); }

  // Level-order node index: strings of length L occupy [2^L - 1, 2^(L+1) - 1).
  static size_t node_index(const BitString& x) {
    return (size_t(1) << x.length()) - 1 + x.value();
  }
  static BitString node_string(int length, uint64_t value) {
    return BitString(value, length);
  }

  const Dyadic& at(const BitString& x) const;
  void set(const BitString& x, const Dyadic& v);

  const Dyadic& at_index(size_t i) const { return values_[i]; }
  void set_index(size_t i, const Dyadic& v) { values_[i] = v; }

  // Exactly 1 at the empty string.
  bool normalized() const;

  bool operator==(const SemimeasureTable&) const = default;

 private:
  int depth_ = 0;
  std::vector<Dyadic> values_;
};

struct Violation {
  BitString where;
  std::string what;  // rendered inequality with both sides
};

// Empty iff the table satisfies all semimeasure invariants. Violations are
// data, not errors.
std::vector<Violation> validate(const SemimeasureTable& tab);

// value(x) - value(x0) - value(x1): the probability that the generated
// sequence is finite and equals x. Requires |x| < depth.
Dyadic finite_string_mass(const SemimeasureTable& tab, const BitString& x);

// Pointwise weighted sum. Requires equal depths and weight sum <= 1.
SemimeasureTable mix(const std::vector<SemimeasureTable>& tables,
                     const std::vector<Dyadic>& weights);

// Padding semimeasure for a per-length margin schedule d(0..D):
//   S(x) = 2^-|x| * sum_{|x| <= m <= D} 2^-d(m),
// with gap S(x) - S(x0) - S(x1) = 2^-(|x|+d(|x|)) at every internal node.
// Requires sum_{m=1..D} 2^-d(m) <= 1 (the weight that matters once the
// root is forced to 1 downstream); the root term may push S(empty) above 1,
// in which case validate() reports it.
SemimeasureTable pad_semimeasure(const std::vector<int>& d, int depth);

struct EnumerationStages {
  std::vector<SemimeasureTable> stages;
};

// Checks each stage individually plus pointwise monotonicity between
// consecutive stages.
std::vector<Violation> validate_stages(const EnumerationStages& s);

}  // namespace conecode
