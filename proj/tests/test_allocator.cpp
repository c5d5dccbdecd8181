#include <doctest.h>

#include <random>

#include "conecode/allocator.hpp"
#include "conecode/models.hpp"
#include "conecode/rounding.hpp"
#include "support/oracles.hpp"

using namespace conecode;
using namespace conecode::testing;

namespace {

Allocation uniform_linear_allocation(int depth) {
  SemimeasureTable M = realize(ModelSpec::uniform(), depth);
  return build_allocation({pad_and_round(M, margin_linear(depth))});
}

}  // namespace

TEST_SUITE_BEGIN("allocator");

TEST_CASE("running example: uniform, d(n)=n, D=2") {
  SemimeasureTable M = realize(ModelSpec::uniform(), 2);
  RoundedTable r = pad_and_round(M, margin_linear(2));
  REQUIRE(r.table.at(BitString::parse("0")) == Dyadic(3, 3));
  Allocation a = build_allocation({r});

  // The root's cones cover the whole space with stems of length g(0) = 1.
  CHECK(a.stems(BitString()) == std::vector<uint64_t>{0, 1});
  CHECK(a.covered_mass(BitString()) == Dyadic::one());

  // R("0") = 3/8 becomes the three leftmost length-3 stems.
  CHECK(a.stems(BitString::parse("0")) == std::vector<uint64_t>{0b000, 0b001, 0b010});
  // Its sibling packs next, skipping nothing.
  CHECK(a.stems(BitString::parse("1")) == std::vector<uint64_t>{0b011, 0b100, 0b101});
}

TEST_CASE("a value equal to one grid cell is a single cone") {
  SemimeasureTable tab(1);
  tab.set(BitString(), Dyadic::one());
  tab.set(BitString::parse("0"), Dyadic(1, 3));
  RoundedTable r{tab, GranularitySchedule::per_length({1, 3})};
  Allocation a = build_allocation({r});
  CHECK(a.stems(BitString::parse("0")) == std::vector<uint64_t>{0b000});
  CHECK(a.stems(BitString::parse("1")).empty());
  CHECK(a.preimage(BitString::parse("1")).empty());
}

TEST_CASE("stage growth adds exactly the new cells and keeps old cones") {
  SemimeasureTable s1(1), s2(1);
  s1.set(BitString(), Dyadic::one());
  s1.set(BitString::parse("0"), Dyadic(1, 2));
  s1.set(BitString::parse("1"), Dyadic(1, 2));
  s2 = s1;
  s2.set(BitString::parse("1"), Dyadic(2, 2));  // one more 1/4 cell
  GranularitySchedule g = GranularitySchedule::per_length({1, 2});
  Allocation first = build_allocation({RoundedTable{s1, g}});
  Allocation both = build_allocation({RoundedTable{s1, g}, RoundedTable{s2, g}});
  auto old0 = first.stems(BitString::parse("0"));
  auto old1 = first.stems(BitString::parse("1"));
  CHECK(both.stems(BitString::parse("0")) == old0);
  auto new1 = both.stems(BitString::parse("1"));
  REQUIRE(new1.size() == old1.size() + 1);
  for (uint64_t stem : old1)
    CHECK(std::find(new1.begin(), new1.end(), stem) != new1.end());
}

TEST_CASE("apply_map on the running example") {
  Allocation a = uniform_linear_allocation(1);
  CHECK(a.apply_map(BitString()) == BitString());
  // R("0") = 1/4 at D=1: stems {000, 001}; any extension of 001 maps to "0".
  CHECK(a.stems(BitString::parse("0")) == std::vector<uint64_t>{0b000, 0b001});
  CHECK(a.apply_map(BitString::parse("001")) == BitString::parse("0"));
  CHECK(a.apply_map(BitString::parse("0011")) == BitString::parse("0"));
  CHECK(a.apply_map(BitString::parse("00110101")) == BitString::parse("0"));
  // Too few bits commit to nothing.
  CHECK(a.apply_map(BitString::parse("00")) == BitString());
}

TEST_CASE("bits beyond g(n) never change the first n output bits") {
  Allocation a = uniform_linear_allocation(2);
  int L = a.schedule().max_granularity();
  for (uint64_t u = 0; u < (uint64_t(1) << L); ++u) {
    BitString input(u, L);
    BitString out = a.apply_map(input);
    for (int n = 1; n <= out.length(); ++n) {
      int g = a.schedule().at_length(n);
      for (int flip = g; flip < L; ++flip) {
        BitString other(u ^ (uint64_t(1) << (L - 1 - flip)), L);
        BitString other_out = a.apply_map(other);
        REQUIRE(other_out.length() >= n);
        CHECK(other_out.prefix(n) == out.prefix(n));
      }
    }
  }
}

TEST_CASE("the map is monotone: longer inputs extend the output") {
  std::mt19937_64 rng(41);
  Allocation a = uniform_linear_allocation(3);
  int L = a.schedule().max_granularity();
  for (int rep = 0; rep < 500; ++rep) {
    uint64_t u = rng() & ((uint64_t(1) << L) - 1);
    BitString input(u, L);
    BitString full = a.apply_map(input);
    int cut = int(rng() % (L + 1));
    CHECK(a.apply_map(input.prefix(cut)).is_prefix_of(full));
  }
}

TEST_CASE("image equals the final rounded stage exactly, and the brute-force tally agrees") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    int depth = 2 + int(rng() % 3);
    EnumerationStages stages = random_stages(rng, depth, 3);
    auto rounded = round_stages(stages, margin_linear(depth));
    Allocation a = build_allocation(rounded);
    SemimeasureTable image = a.image_semimeasure(depth);
    CHECK(image == a.image_semimeasure(depth));
    for (size_t i = 0; i < image.node_count(); ++i)
      CHECK(image.at_index(i) == rounded.back().table.at_index(i));
    SemimeasureTable tally = image_by_enumeration(a);
    for (size_t i = 0; i < image.node_count(); ++i)
      CHECK(tally.at_index(i) == rounded.back().table.at_index(i));
  }
}

TEST_CASE("empty model: the image is the rounded pad alone") {
  SemimeasureTable M(2);
  M.set_index(0, Dyadic::one());
  RoundedTable r = pad_and_round(M, margin_linear(2));
  Allocation a = build_allocation({r});
  SemimeasureTable tally = image_by_enumeration(a);
  for (size_t i = 0; i < tally.node_count(); ++i)
    CHECK(tally.at_index(i) == r.table.at_index(i));
}

TEST_CASE("preimages nest and their deficit is the finite-string mass of R") {
  SemimeasureTable M = realize(ModelSpec::bernoulli(Dyadic(3, 2)), 3);
  RoundedTable r = pad_and_round(M, margin_linear(3));
  Allocation a = build_allocation({r});
  CHECK(a.covered_mass(BitString()) == Dyadic::one());
  for (int n = 0; n < 3; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      auto parent = a.preimage(x);
      Dyadic child_mass =
          a.covered_mass(x.appended(0)) + a.covered_mass(x.appended(1));
      CHECK(a.covered_mass(x) - child_mass == finite_string_mass(r.table, x));
      for (int b = 0; b < 2; ++b) {
        for (const Cone& c : a.preimage(x.appended(b))) {
          bool inside = false;
          for (const Cone& p : parent)
            if (cone_contains(p, c)) inside = true;
          CHECK(inside);
        }
      }
    }
  }
}

TEST_CASE("incremental building matches batch building") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    int depth = 2 + int(rng() % 3);
    EnumerationStages stages = random_stages(rng, depth, 4);
    auto rounded = round_stages(stages, margin_double_log(depth));
    AllocationBuilder incremental(rounded[0].schedule);
    for (size_t t = 0; t + 1 < rounded.size(); ++t)
      incremental.add_stage(rounded[t]);
    Allocation prefix_alloc = incremental.allocation();
    std::vector<RoundedTable> head(rounded.begin(), rounded.end() - 1);
    CHECK(prefix_alloc == build_allocation(head));
    incremental.add_stage(rounded.back());
    CHECK(incremental.allocation() == build_allocation(rounded));
  }
}

TEST_CASE("allocation works with per-string budget schedules") {
  ModelSpec model = ModelSpec::bernoulli(Dyadic(3, 2));
  BudgetSchedule t = budget_schedule_of(model, 5, 4);
  RoundedTable r = pad_and_round(realize(model, 5), t);
  Allocation a = build_allocation({r});
  SemimeasureTable image = a.image_semimeasure(5);
  for (size_t i = 0; i < image.node_count(); ++i)
    CHECK(image.at_index(i) == r.table.at_index(i));
  SemimeasureTable tally = image_by_enumeration(a);
  for (size_t i = 0; i < image.node_count(); ++i)
    CHECK(tally.at_index(i) == r.table.at_index(i));
}

TEST_CASE("decreasing stages and broken schedules are rejected") {
  SemimeasureTable M = realize(ModelSpec::uniform(), 2);
  RoundedTable r = pad_and_round(M, margin_linear(2));
  SemimeasureTable less(2);
  less.set_index(0, Dyadic::one());
  RoundedTable smaller{less, r.schedule};
  AllocationBuilder builder(r.schedule);
  builder.add_stage(r);
  CHECK_THROWS_AS(builder.add_stage(smaller), Error);
  try {
    AllocationBuilder b2(r.schedule);
    b2.add_stage(r);
    b2.add_stage(smaller);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_monotone_stages);
  }

  CHECK_THROWS_AS(GranularitySchedule::per_length({3, 2, 4}), Error);
  try {
    GranularitySchedule::per_length({3, 2, 4});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schedule_not_monotone);
  }
}

TEST_CASE("off-grid stages are rejected") {
  SemimeasureTable tab(1);
  tab.set(BitString(), Dyadic::one());
  tab.set(BitString::parse("0"), Dyadic(1, 5));  // not on the 2^-2 grid
  RoundedTable r{tab, GranularitySchedule::per_length({1, 2})};
  CHECK_THROWS_AS(build_allocation({r}), Error);
}

TEST_SUITE_END();
