#pragma once

// Incremental cone allocation: assign to every output string x a set of
// disjoint input cones with stems of length exactly g(|x|) whose total
// measure equals the rounded value R(x). The induced map T sends the uniform
// distribution to R, and the first n output bits depend only on the first
// g(n) input bits.

#include <cstdint>
#include <set>
#include <vector>

#include "conecode/cone.hpp"
#include "conecode/rounding.hpp"
#include "conecode/schedule.hpp"
#include "conecode/semimeasure.hpp"

namespace conecode {

class AllocationBuilder;

class Allocation {
 public:
  int depth() const { return depth_; }
  const GranularitySchedule& schedule() const { return schedule_; }

  // Sorted stems (numeric order == lexicographic at fixed length) of the
  // cones allocated to x; all have length schedule().at(x).
  const std::vector<uint64_t>& stems(const BitString& x) const;

  std::vector<Cone> preimage(const BitString& x) const;

  // The longest output string whose allocation contains the input's cone.
  BitString apply_map(const BitString& input) const;

  // Sum of cone measures per string; equals the final rounded stage exactly.
  SemimeasureTable image_semimeasure(int depth) const;

  // count(x) * 2^-g(x), without building a whole table.
  Dyadic covered_mass(const BitString& x) const;

  bool operator==(const Allocation&) const = default;

 private:
  friend class AllocationBuilder;
  friend Allocation make_allocation_unchecked(int, GranularitySchedule,
                                              std::vector<std::vector<uint64_t>>);
  int depth_ = 0;
  GranularitySchedule schedule_;
  std::vector<std::vector<uint64_t>> cones_;  // by level-order node index
};

// Deserialization backdoor; performs structural checks only.
Allocation make_allocation_unchecked(int depth, GranularitySchedule schedule,
                                     std::vector<std::vector<uint64_t>> cones);

class AllocationBuilder {
 public:
  explicit AllocationBuilder(GranularitySchedule schedule);

  // Feeds the next rounded stage. Values may only grow, each by whole grid
  // cells; new cones are carved out of the parent's free space, leftmost
  // stem first. Never revokes a cone.
  void add_stage(const RoundedTable& stage);

  int stage_count() const { return stage_count_; }

  // Immutable snapshot of the current allocation.
  Allocation allocation() const;

 private:
  struct Piece {
    u128 key;  // left endpoint, padded
    uint64_t stem;
    int len;
    bool operator<(const Piece& o) const { return key < o.key; }
  };

  uint64_t take_leftmost(std::set<Piece>& pool, int len);
  void add_piece(std::set<Piece>& pool, uint64_t stem, int len);

  GranularitySchedule schedule_;
  int depth_;
  int stage_count_ = 0;
  std::vector<Dyadic> current_;               // last accepted stage values
  std::vector<std::vector<uint64_t>> cones_;  // granted stems per node
  std::vector<std::set<Piece>> free_;         // per-node free space for children
};

Allocation build_allocation(const std::vector<RoundedTable>& stages);

}  // namespace conecode
