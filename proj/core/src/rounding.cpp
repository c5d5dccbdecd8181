#include "conecode/rounding.hpp"

#include <string>
#include <variant>

namespace conecode {

namespace {

// Weight the pad places strictly below the root. Forcing the root to 1 stays
// sound exactly when this is <= 1: then A(0)+A(1) <= (M(0)+M(1))/2 + 1/2 <= 1.
Dyadic pad_weight_below_root(const PadSchedule& schedule, int depth) {
  if (const auto* m = std::get_if<MarginSchedule>(&schedule)) {
    Dyadic sum;
    for (int n = 1; n <= depth; ++n) sum += Dyadic::two_to_minus(m->d[n]);
    return sum;
  }
  const auto& b = std::get<BudgetSchedule>(schedule);
  Dyadic sum;
  for (size_t i = 1; i < b.t.size(); ++i) sum += Dyadic::two_to_minus(b.t[i]);
  return sum;
}

}  // namespace

SemimeasureTable pad_table(const PadSchedule& schedule, int depth) {
  if (const auto* m = std::get_if<MarginSchedule>(&schedule))
    return pad_semimeasure(m->d, depth);
  const auto& b = std::get<BudgetSchedule>(schedule);
  if (b.depth != depth) fail(Errc::invalid_input, "budget schedule depth mismatch");
  if (!budget_is_child_monotone(b))
    fail(Errc::schedule_not_monotone, "budget schedule not child-monotone");
  if (pad_weight_below_root(schedule, depth) > Dyadic::one())
    fail(Errc::weight_overflow,
         "budget pad weight below the root exceeds 1; increase the slack");
  // S(x) = 2^-t(x) + S(x0) + S(x1), computed bottom-up.
  SemimeasureTable out(depth);
  for (int n = depth; n >= 0; --n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      size_t i = (size_t(1) << n) - 1 + v;
      Dyadic s = Dyadic::two_to_minus(b.t[i]);
      if (n < depth) {
        size_t child0 = (size_t(1) << (n + 1)) - 1 + 2 * v;
        s += out.at_index(child0);
        s += out.at_index(child0 + 1);
      }
      out.set_index(i, s);
    }
  }
  return out;
}

RoundedTable pad_and_round(const SemimeasureTable& M, const PadSchedule& schedule) {
  auto violations = validate(M);
  if (!violations.empty())
    fail(Errc::invalid_input,
         "input is not a semimeasure: " + violations.front().what);
  const int depth = M.depth();
  GranularitySchedule g = GranularitySchedule::from_pad(schedule, depth);
  SemimeasureTable pad = pad_table(schedule, depth);
  SemimeasureTable rounded(depth);
  rounded.set_index(0, Dyadic::one());
  for (int n = 1; n <= depth; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      size_t i = SemimeasureTable::node_index(x);
      Dyadic averaged = (M.at_index(i) + pad.at_index(i)).halved();
      rounded.set_index(i, averaged.floor_strict(g.at(x)));
    }
  }
  return RoundedTable{std::move(rounded), std::move(g)};
}

std::vector<RoundedTable> round_stages(const EnumerationStages& stages,
                                       const PadSchedule& schedule) {
  for (size_t t = 1; t < stages.stages.size(); ++t) {
    const auto& prev = stages.stages[t - 1];
    const auto& cur = stages.stages[t];
    if (cur.depth() != prev.depth())
      fail(Errc::invalid_input, "stage depth changed at stage " + std::to_string(t));
    for (size_t i = 0; i < cur.node_count(); ++i)
      if (cur.at_index(i) < prev.at_index(i))
        fail(Errc::not_monotone_stages,
             "stage " + std::to_string(t) + " decreases at node " + std::to_string(i));
  }
  std::vector<RoundedTable> out;
  out.reserve(stages.stages.size());
  for (const auto& stage : stages.stages) out.push_back(pad_and_round(stage, schedule));
  return out;
}

}  // namespace conecode
