#include "conecode/schedule.hpp"

#include <algorithm>
#include <string>

namespace conecode {

MarginSchedule margin_linear(int depth) {
  MarginSchedule m;
  m.d.resize(size_t(depth) + 1);
  for (int n = 0; n <= depth; ++n) m.d[n] = n;
  return m;
}

MarginSchedule margin_double_log(int depth) {
  MarginSchedule m;
  m.d.resize(size_t(depth) + 1);
  for (int n = 0; n <= depth; ++n) {
    int ceil_log = 0;
    while ((1 << ceil_log) < n + 2) ++ceil_log;
    m.d[n] = 2 * ceil_log + 1;
  }
  return m;
}

bool budget_is_child_monotone(const BudgetSchedule& b) {
  for (int n = 0; n < b.depth; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      size_t i = (size_t(1) << n) - 1 + v;
      size_t child0 = (size_t(1) << (n + 1)) - 1 + 2 * v;
      if (b.t[i] > b.t[child0] || b.t[i] > b.t[child0 + 1]) return false;
    }
  }
  return true;
}

GranularitySchedule GranularitySchedule::per_length(std::vector<int> g) {
  if (g.empty()) fail(Errc::invalid_input, "empty granularity schedule");
  for (size_t n = 0; n < g.size(); ++n) {
    if (g[n] < 0 || g[n] > BitString::kMaxBits)
      fail(Errc::precision_exceeded,
           "granularity " + std::to_string(g[n]) + " outside 0.." +
               std::to_string(BitString::kMaxBits));
    if (n > 0 && g[n] < g[n - 1])
      fail(Errc::schedule_not_monotone,
           "granularity decreases at length " + std::to_string(n));
  }
  GranularitySchedule s;
  s.per_length_ = true;
  s.depth_ = int(g.size()) - 1;
  s.g_ = std::move(g);
  return s;
}

GranularitySchedule GranularitySchedule::per_string(int depth, std::vector<int> g) {
  if (depth < 0 || g.size() != (size_t(1) << (depth + 1)) - 1)
    fail(Errc::invalid_input, "per-string schedule has wrong node count");
  BudgetSchedule probe{depth, g};
  for (int v : g)
    if (v < 0 || v > BitString::kMaxBits)
      fail(Errc::precision_exceeded, "granularity outside 0.." +
                                         std::to_string(BitString::kMaxBits));
  if (!budget_is_child_monotone(probe))
    fail(Errc::schedule_not_monotone, "per-string granularity not child-monotone");
  GranularitySchedule s;
  s.per_length_ = false;
  s.depth_ = depth;
  s.g_ = std::move(g);
  return s;
}

GranularitySchedule GranularitySchedule::from_margin(const MarginSchedule& m,
                                                     int depth) {
  if (int(m.d.size()) != depth + 1)
    fail(Errc::invalid_input, "margin schedule must cover lengths 0..D");
  std::vector<int> g(size_t(depth) + 1);
  for (int n = 0; n <= depth; ++n) {
    if (m.d[n] < 0) fail(Errc::invalid_input, "negative margin exponent");
    g[n] = n + m.d[n] + 1;
  }
  return per_length(std::move(g));
}

GranularitySchedule GranularitySchedule::from_budget(const BudgetSchedule& b) {
  if (!budget_is_child_monotone(b))
    fail(Errc::schedule_not_monotone, "budget schedule not child-monotone");
  std::vector<int> g(b.t.size());
  for (size_t i = 0; i < b.t.size(); ++i) {
    if (b.t[i] < 0) fail(Errc::invalid_input, "negative budget");
    g[i] = b.t[i] + 1;
  }
  return per_string(b.depth, std::move(g));
}

GranularitySchedule GranularitySchedule::from_pad(const PadSchedule& p, int depth) {
  if (const auto* m = std::get_if<MarginSchedule>(&p))
    return from_margin(*m, depth);
  const auto& b = std::get<BudgetSchedule>(p);
  if (b.depth != depth)
    fail(Errc::invalid_input, "budget schedule depth mismatch");
  return from_budget(b);
}

int GranularitySchedule::at_length(int n) const {
  if (!per_length_)
    fail(Errc::invalid_input, "per-string schedule has no per-length view");
  if (n < 0 || n > depth_) fail(Errc::depth_exceeded, "length outside schedule");
  return g_[size_t(n)];
}

int GranularitySchedule::at(const BitString& x) const {
  if (x.length() > depth_) fail(Errc::depth_exceeded, "string outside schedule");
  if (per_length_) return g_[size_t(x.length())];
  return g_[SemimeasureTable::node_index(x)];
}

int GranularitySchedule::max_granularity() const {
  return *std::max_element(g_.begin(), g_.end());
}

}  // namespace conecode
