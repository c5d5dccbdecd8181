#pragma once

// Pad-average-and-strict-round: turn an arbitrary semimeasure table into one
// whose values sit on a dyadic grid, without breaking the semimeasure
// inequality and while keeping every value at least half the input.

#include <vector>

#include "conecode/schedule.hpp"
#include "conecode/semimeasure.hpp"

namespace conecode {

struct RoundedTable {
  SemimeasureTable table;
  GranularitySchedule schedule;
};

// The padding table S used inside pad_and_round, exposed for verification.
// Margin schedule: S(x) = 2^-|x| * sum_{|x|<=m<=D} 2^-d(m).
// Budget schedule: S(x) = sum over descendants y of x (including x) of 2^-t(y).
SemimeasureTable pad_table(const PadSchedule& schedule, int depth);

// Averaged construction A = (M + S)/2 rounded strictly down to the grid
// g(n) = n + d(n) + 1 (margin) or g(x) = t(x) + 1 (budget); the root is then
// forced to exactly 1. Guarantees, tested rather than assumed:
//   (i)  the result validates as a semimeasure,
//   (ii) R(x) >= M(x)/2 for every x other than the root,
//   (iii) every value lies on its grid.
RoundedTable pad_and_round(const SemimeasureTable& M, const PadSchedule& schedule);

// Per-stage pad_and_round; monotone input stages yield pointwise monotone
// rounded stages because strict flooring is monotone.
std::vector<RoundedTable> round_stages(const EnumerationStages& stages,
                                       const PadSchedule& schedule);

}  // namespace conecode
