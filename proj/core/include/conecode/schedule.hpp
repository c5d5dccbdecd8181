#pragma once

// Bit-budget schedules. A margin schedule d(n) fixes the safety margin
// 2^-(n+d(n)) per length and induces the grid g(n) = n + d(n) + 1. A budget
// schedule t(x) is per-string with t(x) <= t(x0), t(x) <= t(x1) and induces
// g(x) = t(x) + 1.

#include <cstdint>
#include <variant>
#include <vector>

#include "conecode/bitstring.hpp"
#include "conecode/errors.hpp"
#include "conecode/semimeasure.hpp"

namespace conecode {

struct MarginSchedule {
  std::vector<int> d;  // indexed by length, size D+1
};

struct BudgetSchedule {
  int depth = 0;
  std::vector<int> t;  // level-order node index, size 2^(D+1)-1
};

using PadSchedule = std::variant<MarginSchedule, BudgetSchedule>;

// d(n) = n, the 2n+O(1) regime.
MarginSchedule margin_linear(int depth);
// d(n) = 2*ceil(log2(n+2)) + 1; its full weight sum is <= 1.
MarginSchedule margin_double_log(int depth);

bool budget_is_child_monotone(const BudgetSchedule& b);

class GranularitySchedule {
 public:
  GranularitySchedule() = default;

  // g per length; must be non-decreasing.
  static GranularitySchedule per_length(std::vector<int> g);
  // g per node; must be child-monotone.
  static GranularitySchedule per_string(int depth, std::vector<int> g);

  static GranularitySchedule from_margin(const MarginSchedule& m, int depth);
  static GranularitySchedule from_budget(const BudgetSchedule& b);
  static GranularitySchedule from_pad(const PadSchedule& p, int depth);

  bool is_per_length() const { return per_length_; }
  int depth() const { return depth_; }

  int at_length(int n) const;       // per-length only
  int at(const BitString& x) const; // either flavor
  int max_granularity() const;      // max over all strings (length D)

  const std::vector<int>& raw() const { return g_; }

  bool operator==(const GranularitySchedule&) const = default;

 private:
  bool per_length_ = true;
  int depth_ = 0;
  std::vector<int> g_;
};

}  // namespace conecode
