#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "conecode/bitio.hpp"
#include "conecode/models.hpp"
#include "conecode/rounding.hpp"
#include "conecode/textio.hpp"
#include "support/oracles.hpp"

using namespace conecode;
using namespace conecode::testing;

TEST_SUITE_BEGIN("io");

TEST_CASE("bit packing is MSB-first with frozen bytes") {
  std::vector<uint8_t> bits{1, 0, 1, 1, 0};
  auto packed = pack_bits(bits);
  REQUIRE(packed.size() == 1);
  CHECK(packed[0] == 0xB0);
  CHECK(unpack_bits(packed, 5) == bits);

  auto nine = pack_bits({1, 1, 1, 1, 1, 1, 1, 1, 1});
  REQUIRE(nine.size() == 2);
  CHECK(nine[0] == 0xFF);
  CHECK(nine[1] == 0x80);
}

TEST_CASE("bitstream files carry a little-endian count header") {
  auto path = std::filesystem::temp_directory_path() / "conecode_bits_test.bin";
  std::vector<uint8_t> bits{1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1};
  write_bitstream_file(path, bits);
  std::ifstream in(path, std::ios::binary);
  std::vector<uint8_t> raw((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
  REQUIRE(raw.size() == 10);  // 8-byte header + 2 payload bytes
  CHECK(raw[0] == 11);
  for (int i = 1; i < 8; ++i) CHECK(raw[i] == 0);
  CHECK(read_bitstream_file(path) == bits);
  std::filesystem::remove(path);
}

TEST_CASE("packed round trip over random bit vectors") {
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<uint8_t> bits(rng() % 70);
    for (auto& b : bits) b = uint8_t(rng() % 2);
    CHECK(unpack_bits(pack_bits(bits), bits.size()) == bits);
  }
}

TEST_CASE("byte/bit views invert each other") {
  std::mt19937_64 rng(62);
  std::vector<uint8_t> bytes(17);
  for (auto& b : bytes) b = uint8_t(rng());
  CHECK(bits_to_bytes(bytes_to_bits(bytes)) == bytes);
  CHECK_THROWS_AS(bits_to_bytes({1, 0, 1}), Error);
}

TEST_CASE("table files round-trip and tolerate any record order") {
  std::mt19937_64 rng(63);
  SemimeasureTable tab = random_table(rng, 5);
  std::stringstream buf;
  write_table(buf, tab);
  CHECK(read_table(buf) == tab);

  std::stringstream scrambled;
  scrambled << "depth 2\n10 1/2^2\n- 1/2^0\n0 1/2^1\n";
  SemimeasureTable parsed = read_table(scrambled);
  CHECK(parsed.at(BitString()) == Dyadic::one());
  CHECK(parsed.at(BitString::parse("10")) == Dyadic(1, 2));
  CHECK(parsed.at(BitString::parse("11")).is_zero());  // missing defaults to 0
}

TEST_CASE("table files reject duplicates and missing headers") {
  std::stringstream dup("depth 1\n0 1/2^1\n0 1/2^2\n");
  CHECK_THROWS_AS(read_table(dup), Error);
  std::stringstream headless("0 1/2^1\n");
  CHECK_THROWS_AS(read_table(headless), Error);
  std::stringstream deep("depth 1\n000 1/2^3\n");
  CHECK_THROWS_AS(read_table(deep), Error);
}

TEST_CASE("allocation dumps round-trip for both schedule flavors") {
  SemimeasureTable M = realize(ModelSpec::bernoulli(Dyadic(3, 2)), 4);
  Allocation per_length = build_allocation({pad_and_round(M, margin_linear(4))});
  std::stringstream buf;
  write_allocation(buf, per_length);
  CHECK(read_allocation(buf) == per_length);

  BudgetSchedule t = budget_schedule_of(ModelSpec::bernoulli(Dyadic(3, 2)), 4, 4);
  Allocation per_string = build_allocation({pad_and_round(M, t)});
  std::stringstream buf2;
  write_allocation(buf2, per_string);
  CHECK(read_allocation(buf2) == per_string);
}

TEST_CASE("allocation dumps reject inconsistent stems") {
  std::stringstream bad("depth 1\nschedule length 1 2\nalloc - 0\nalloc - 1\nalloc 0 000\n");
  CHECK_THROWS_AS(read_allocation(bad), Error);  // stem length 3 != g(1) = 2
  std::stringstream dup("depth 1\nschedule length 1 2\nalloc - 0\nalloc - 0\n");
  CHECK_THROWS_AS(read_allocation(dup), Error);
}

TEST_CASE("test assignment files round-trip") {
  std::mt19937_64 rng(64);
  TestAssignment t = random_assignment(rng, 5);
  std::stringstream buf;
  write_test_assignment(buf, t);
  TestAssignment back = read_test_assignment(buf);
  CHECK(back.leaf_bits() == t.leaf_bits());
  for (uint64_t leaf = 0; leaf < t.leaf_count(); ++leaf)
    CHECK(back.at(leaf) == t.at(leaf));
}

TEST_SUITE_END();
