#pragma once

// Line-oriented text formats: semimeasure tables, allocation dumps, and test
// assignments. All of them round-trip losslessly.

#include <iosfwd>
#include <string>

#include "conecode/allocator.hpp"
#include "conecode/reduction.hpp"
#include "conecode/semimeasure.hpp"

namespace conecode {

// "-" for the empty string, otherwise the bits themselves.
std::string render_bits(const BitString& x);

// Table format: a `depth <D>` header, then `<bitstring|-> <m>/2^<e>` records
// in any order; missing entries default to 0.
void write_table(std::ostream& out, const SemimeasureTable& tab);
SemimeasureTable read_table(std::istream& in);

// Allocation dump: `depth <D>`, a `schedule ...` header (with `g <node> <bits>`
// lines for per-string schedules), then `alloc <output|-> <stem>` lines.
void write_allocation(std::ostream& out, const Allocation& a);
Allocation read_allocation(std::istream& in);

// Test assignment: `leafbits <L>` header, then `<leaf> <m>/2^<e>` records;
// missing leaves default to 0.
void write_test_assignment(std::ostream& out, const TestAssignment& t);
TestAssignment read_test_assignment(std::istream& in);

}  // namespace conecode
