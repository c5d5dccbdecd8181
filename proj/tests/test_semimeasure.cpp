#include <doctest.h>

#include <random>

#include "conecode/models.hpp"
#include "conecode/semimeasure.hpp"
#include "support/oracles.hpp"

using namespace conecode;
using namespace conecode::testing;

namespace {

SemimeasureTable uniform_table(int depth) {
  return realize(ModelSpec::uniform(), depth);
}

SemimeasureTable quarter_geometric(int depth) {
  return realize(ModelSpec::geometric(Dyadic(1, 2)), depth);
}

}  // namespace

TEST_SUITE_BEGIN("semimeasure");

TEST_CASE("uniform table validates with equality everywhere") {
  SemimeasureTable tab = uniform_table(3);
  CHECK(validate(tab).empty());
  for (int n = 0; n < 3; ++n)
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v)
      CHECK(finite_string_mass(tab, SemimeasureTable::node_string(n, v)).is_zero());
}

TEST_CASE("overweight children are reported at the root") {
  SemimeasureTable tab(1);
  tab.set(BitString(), Dyadic::one());
  tab.set(BitString::parse("0"), Dyadic(3, 2));  // 3/4
  tab.set(BitString::parse("1"), Dyadic(1, 1));  // 1/2
  auto violations = validate(tab);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].where == BitString());
  CHECK(violations[0].what.find("5/2^2") != std::string::npos);
}

TEST_CASE("the fixed quarter pad is a valid semimeasure") {
  SemimeasureTable tab = quarter_geometric(4);
  CHECK(validate(tab).empty());
  // Gap at length n is 2^-2n - 2*2^-(2n+2) = 2^-(2n+1).
  for (int n = 0; n < 4; ++n) {
    BitString x(uint64_t(0), n);
    CHECK(finite_string_mass(tab, x) == Dyadic::two_to_minus(2 * n + 1));
  }
}

TEST_CASE("finite_string_mass of the half/half mixture") {
  auto mixed = mix({uniform_table(4), quarter_geometric(4)},
                   {Dyadic(1, 1), Dyadic(1, 1)});
  // Oracle: (1/2)*0 + (1/2)*2^-(2n+1) at length n = 2.
  Rat expect = Rat::of(1, 2) * (rat_pow2(4) - rat_pow2(5) - rat_pow2(5)) +
               Rat::of(1, 2) * rat_pow2(5);
  CHECK(expect == rat_pow2(6));
  CHECK(finite_string_mass(mixed, BitString::parse("01")) == Dyadic(1, 6));
}

TEST_CASE("finite_string_mass rejects strings at full depth") {
  SemimeasureTable tab = uniform_table(2);
  CHECK_THROWS_AS(finite_string_mass(tab, BitString::parse("01")), Error);
  try {
    finite_string_mass(tab, BitString::parse("01"));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::depth_exceeded);
  }
}

TEST_CASE("mix is the identity on a single full-weight table") {
  SemimeasureTable tab = uniform_table(3);
  CHECK(mix({tab}, {Dyadic::one()}) == tab);
}

TEST_CASE("mix worked values") {
  auto mixed = mix({uniform_table(2), quarter_geometric(2)},
                   {Dyadic(1, 1), Dyadic(1, 1)});
  CHECK(mixed.at(BitString()) == Dyadic::one());
  // 1/2 * 1/2 + 1/2 * 1/4 = 3/8 at length 1.
  Rat expect = Rat::of(1, 2) * Rat::of(1, 2) + Rat::of(1, 2) * Rat::of(1, 4);
  CHECK(expect == Rat::of(3, 8));
  CHECK(rat_equals(mixed.at(BitString::parse("0")), expect));
}

TEST_CASE("mix rejects overweight mixtures") {
  CHECK_THROWS_AS(mix({uniform_table(1), uniform_table(1)},
                      {Dyadic(3, 2), Dyadic(1, 1)}),
                  Error);
  try {
    mix({uniform_table(1)}, {Dyadic(3, 1)});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::weight_overflow);
  }
}

TEST_CASE("semimeasures are closed under sub-convex mixing") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 60; ++rep) {
    auto a = random_table(rng, 5);
    auto b = random_table(rng, 5, 3, rep % 2 == 0);
    REQUIRE(validate(a).empty());
    REQUIRE(validate(b).empty());
    Dyadic wa(rng() % 8, 4), wb(rng() % 9, 4);  // sum at most 15/16
    auto mixed = mix({a, b}, {wa, wb});
    CHECK(validate(mixed).empty());
    for (int probe = 0; probe < 10; ++probe) {
      int n = int(rng() % 6);
      BitString x(rng() & ((uint64_t(1) << n) - 1), n);
      CHECK(wa * a.at(x) <= mixed.at(x));
      CHECK(rat_equals(mixed.at(x),
                       rat_of(wa) * rat_of(a.at(x)) + rat_of(wb) * rat_of(b.at(x))));
    }
  }
}

TEST_CASE("pad gap for d(n)=n is 2^-2n, by direct summation") {
  const int depth = 5;
  std::vector<int> d(depth + 1);
  for (int n = 0; n <= depth; ++n) d[n] = n;
  SemimeasureTable pad = pad_semimeasure(d, depth);
  for (int n = 0; n <= depth; ++n) {
    // Oracle: S(x) = 2^-n * sum_{m=n..D} 2^-m, independent summation.
    Rat expect;
    for (int m = n; m <= depth; ++m) expect = expect + rat_pow2(m);
    expect = expect * rat_pow2(n);
    BitString x(uint64_t(0), n);
    CHECK(rat_equals(pad.at(x), expect));
    if (n < depth) CHECK(finite_string_mass(pad, x) == Dyadic::two_to_minus(2 * n));
  }
}

TEST_CASE("pad closed form 2^(-2|x|+1) * (1 - 2^(|x|-D-1)) for d(n)=n") {
  const int depth = 3;
  std::vector<int> d{0, 1, 2, 3};
  SemimeasureTable pad = pad_semimeasure(d, depth);
  for (int n = 0; n <= depth; ++n) {
    Rat closed = rat_pow2(2 * n) * Rat::of(2) *
                 (Rat::of(1) - rat_pow2(depth + 1 - n));
    CHECK(rat_equals(pad.at(BitString(uint64_t(0), n)), closed));
  }
  // At the root the oracle gives 1 + 1/2 + 1/4 + 1/8 = 15/8; above 1, which
  // validate() duly reports — the downstream rounding forces the root to 1.
  CHECK(pad.at(BitString()) == Dyadic(15, 3));
  CHECK(!validate(pad).empty());
}

TEST_CASE("pad weight below the root above 1 is rejected") {
  CHECK_THROWS_AS(pad_semimeasure({0, 0, 0}, 2), Error);
  try {
    pad_semimeasure({0, 0, 0}, 2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::weight_overflow);
  }
}

TEST_CASE("pad gap identity over random admissible schedules") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    int depth = 2 + int(rng() % 5);
    std::vector<int> d(size_t(depth) + 1);
    // d(n) >= n+1 keeps the full weight sum at most 1.
    for (int n = 0; n <= depth; ++n) d[n] = n + 1 + int(rng() % 3);
    SemimeasureTable pad = pad_semimeasure(d, depth);
    CHECK(validate(pad).empty());
    for (int n = 0; n < depth; ++n)
      for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
        BitString x = SemimeasureTable::node_string(n, v);
        CHECK(finite_string_mass(pad, x) == Dyadic::two_to_minus(n + d[n]));
      }
  }
}

TEST_CASE("total probability bookkeeping over finite and infinite outcomes") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 40; ++rep) {
    int depth = 2 + int(rng() % 4);
    auto tab = random_table(rng, depth, 3, false, rep % 3 == 0);
    REQUIRE(validate(tab).empty());
    Dyadic total;
    for (int n = 0; n < depth; ++n)
      for (uint64_t v = 0; v < (uint64_t(1) << n); ++v)
        total += finite_string_mass(tab, SemimeasureTable::node_string(n, v));
    for (uint64_t v = 0; v < (uint64_t(1) << depth); ++v)
      total += tab.at(SemimeasureTable::node_string(depth, v));
    CHECK(total == tab.at(BitString()));
  }
}

TEST_CASE("stage validation flags decreases and bad stages") {
  std::mt19937_64 rng(14);
  EnumerationStages stages = random_stages(rng, 4, 3);
  CHECK(validate_stages(stages).empty());

  EnumerationStages broken = stages;
  broken.stages[2] = broken.stages[0];  // jump back down
  auto violations = validate_stages(broken);
  CHECK(!violations.empty());
  CHECK(violations[0].what.find("stage 2") != std::string::npos);
}

TEST_SUITE_END();
