#include "conecode/allocator.hpp"

#include <algorithm>
#include <string>

namespace conecode {

namespace {

// Hard cap on total granted cones; keeps hostile schedules from exhausting
// memory before a clean failure.
constexpr uint64_t kMaxTotalCones = uint64_t(1) << 22;

uint64_t cells_of(const Dyadic& diff, int grid) {
  if (diff.is_zero()) return 0;
  u128 m = diff.numerator();
  int e = diff.exponent();
  if (e <= grid) {
    int shift = grid - e;
    int bits = 0;
    for (u128 t = m; t != 0; t >>= 1) ++bits;
    if (bits + shift > 63)
      fail(Errc::precision_exceeded, "allocation increment too large");
    return uint64_t(m) << shift;
  }
  int shift = e - grid;
  if ((m & ((u128(1) << shift) - 1)) != 0)
    fail(Errc::internal_invariant_broken, "stage increment is off the grid");
  u128 cells = m >> shift;
  if ((cells >> 63) != 0)
    fail(Errc::precision_exceeded, "allocation increment too large");
  return uint64_t(cells);
}

}  // namespace

const std::vector<uint64_t>& Allocation::stems(const BitString& x) const {
  if (x.length() > depth_)
    fail(Errc::depth_exceeded, "string longer than allocation depth");
  return cones_[SemimeasureTable::node_index(x)];
}

std::vector<Cone> Allocation::preimage(const BitString& x) const {
  const auto& s = stems(x);
  int g = schedule_.at(x);
  std::vector<Cone> out;
  out.reserve(s.size());
  for (uint64_t stem : s) out.push_back(Cone{BitString(stem, g)});
  return out;
}

BitString Allocation::apply_map(const BitString& input) const {
  BitString x;
  while (x.length() < depth_) {
    bool descended = false;
    for (int b = 0; b < 2 && !descended; ++b) {
      BitString child = x.appended(b);
      int g = schedule_.at(child);
      if (input.length() < g) continue;
      uint64_t candidate = input.prefix(g).value();
      const auto& s = cones_[SemimeasureTable::node_index(child)];
      if (std::binary_search(s.begin(), s.end(), candidate)) {
        x = child;
        descended = true;
      }
    }
    if (!descended) break;
  }
  return x;
}

SemimeasureTable Allocation::image_semimeasure(int depth) const {
  if (depth > depth_)
    fail(Errc::depth_exceeded, "image depth exceeds allocation depth");
  SemimeasureTable out(depth);
  for (int n = 0; n <= depth; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      size_t i = SemimeasureTable::node_index(x);
      out.set_index(i, Dyadic(u128(cones_[i].size()), schedule_.at(x)));
    }
  }
  return out;
}

Dyadic Allocation::covered_mass(const BitString& x) const {
  return Dyadic(u128(stems(x).size()), schedule_.at(x));
}

Allocation make_allocation_unchecked(int depth, GranularitySchedule schedule,
                                     std::vector<std::vector<uint64_t>> cones) {
  if (schedule.depth() != depth)
    fail(Errc::invalid_input, "schedule depth mismatch");
  if (cones.size() != (size_t(1) << (depth + 1)) - 1)
    fail(Errc::invalid_input, "allocation node count mismatch");
  for (int n = 0; n <= depth; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      auto& s = cones[SemimeasureTable::node_index(x)];
      int g = schedule.at(x);
      for (uint64_t stem : s)
        if (g < 64 && (stem >> g) != 0)
          fail(Errc::invalid_input, "stem wider than its granularity");
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        fail(Errc::invalid_input, "duplicate stem in allocation");
    }
  }
  Allocation a;
  a.depth_ = depth;
  a.schedule_ = std::move(schedule);
  a.cones_ = std::move(cones);
  return a;
}

AllocationBuilder::AllocationBuilder(GranularitySchedule schedule)
    : schedule_(std::move(schedule)), depth_(schedule_.depth()) {
  size_t nodes = (size_t(1) << (depth_ + 1)) - 1;
  current_.assign(nodes, Dyadic());
  cones_.assign(nodes, {});
  free_.assign(nodes, {});
  if (schedule_.at(BitString()) > 24)
    fail(Errc::precision_exceeded, "root granularity too large to materialize");
}

void AllocationBuilder::add_piece(std::set<Piece>& pool, uint64_t stem, int len) {
  pool.insert(Piece{u128(stem) << (BitString::kMaxBits - len), stem, len});
}

uint64_t AllocationBuilder::take_leftmost(std::set<Piece>& pool, int len) {
  // Leftmost free slot of size 2^-len: the leftmost piece that is at least
  // that large. Pieces finer than the request are skipped; they sit left of
  // previously granted coarse slots and stay available for finer grants.
  for (auto it = pool.begin(); it != pool.end(); ++it) {
    if (it->len > len) continue;
    Piece p = *it;
    pool.erase(it);
    if (p.len == len) return p.stem;
    uint64_t taken = p.stem << (len - p.len);
    // Complement of the taken slot inside the piece, coarsening rightward.
    for (int j = len; j > p.len; --j)
      add_piece(pool, (taken >> (len - j)) | 1, j);
    return taken;
  }
  fail(Errc::internal_invariant_broken,
       "no free slot of size 2^-" + std::to_string(len) +
           " despite the semimeasure inequality");
}

void AllocationBuilder::add_stage(const RoundedTable& stage) {
  if (!(stage.schedule == schedule_))
    fail(Errc::invalid_input, "stage rounded under a different schedule");
  if (stage.table.depth() != depth_)
    fail(Errc::invalid_input, "stage depth mismatch");
  auto violations = validate(stage.table);
  if (!violations.empty())
    fail(Errc::invalid_input,
         "stage is not a semimeasure: " + violations.front().what);
  if (!stage.table.normalized())
    fail(Errc::invalid_input, "rounded stage must be exactly 1 at the root");
  uint64_t total = 0;
  for (const auto& c : cones_) total += c.size();
  for (int n = 0; n <= depth_; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      size_t i = SemimeasureTable::node_index(x);
      const Dyadic& target = stage.table.at_index(i);
      int g = schedule_.at(x);
      if (!target.on_grid(g))
        fail(Errc::invalid_input, "stage value off its grid at " + x.str());
      if (target < current_[i])
        fail(Errc::not_monotone_stages,
             "stage decreases at " + (x.empty() ? std::string("-") : x.str()));
      uint64_t cells = cells_of(target - current_[i], g);
      if (cells == 0) {
        current_[i] = target;
        continue;
      }
      total += cells;
      if (total > kMaxTotalCones)
        fail(Errc::precision_exceeded, "allocation exceeds the cone budget");
      if (n == 0) {
        // The root owns all of the space; materialize its cover directly.
        for (uint64_t stem = 0; stem < cells; ++stem) {
          cones_[i].push_back(stem);
          if (depth_ > 0) add_piece(free_[i], stem, g);
        }
      } else {
        size_t parent = ((i + 1) >> 1) - 1;
        for (uint64_t c = 0; c < cells; ++c) {
          uint64_t stem = take_leftmost(free_[parent], g);
          cones_[i].push_back(stem);
          if (n < depth_) add_piece(free_[i], stem, g);
        }
      }
      current_[i] = target;
    }
  }
  ++stage_count_;
}

Allocation AllocationBuilder::allocation() const {
  Allocation a;
  a.depth_ = depth_;
  a.schedule_ = schedule_;
  a.cones_ = cones_;
  for (auto& s : a.cones_) std::sort(s.begin(), s.end());
  return a;
}

Allocation build_allocation(const std::vector<RoundedTable>& stages) {
  if (stages.empty()) fail(Errc::invalid_input, "no stages to allocate");
  AllocationBuilder builder(stages.front().schedule);
  for (const auto& stage : stages) builder.add_stage(stage);
  return builder.allocation();
}

}  // namespace conecode
