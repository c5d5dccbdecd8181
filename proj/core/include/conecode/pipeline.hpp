#pragma once

// End-to-end wiring: model -> rounding -> allocation -> self-verification,
// plus stream compression over a built allocation. Every reported number is
// recomputed through an independent path before it is written.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conecode/allocator.hpp"
#include "conecode/models.hpp"
#include "conecode/reduction.hpp"
#include "conecode/rounding.hpp"

namespace conecode {

struct ScheduleChoice {
  enum class Kind { margin_linear, margin_double_log, margin_explicit, budget };
  Kind kind = Kind::margin_linear;
  std::vector<int> d;  // margin_explicit
  int slack = 0;       // budget
};

// "d=n", "d=2log", "d=<c0,c1,...>", "budget:slack=<k>".
ScheduleChoice parse_schedule_arg(const std::string& text);
std::string describe_schedule(const ScheduleChoice& choice);
PadSchedule make_pad_schedule(const ScheduleChoice& choice, const ModelSpec& model,
                              int depth);

enum class VerifyLevel { fast, exhaustive };

struct CheckResult {
  std::string name;
  std::string status;  // "pass", "fail", or "skipped"
};

struct VerifyOutcome {
  std::vector<CheckResult> checks;
  bool all_pass = true;

  void add(const std::string& name, bool pass);
  void skip(const std::string& name);
};

// Invariant checks over a finished allocation: structure, refinement,
// sibling disjointness, exact image (against `expected` when given), code
// round-trips, and at the exhaustive level the brute-force input enumeration
// and the bit-budget property. Exhaustive requires max granularity <= 20.
VerifyOutcome verify_allocation(const Allocation& a, const RoundedTable* expected,
                                VerifyLevel level);

struct PipelineConfig {
  ModelSpec model;
  ScheduleChoice schedule;
  int depth = 0;
  std::filesystem::path outdir;
  VerifyLevel level = VerifyLevel::fast;
  int max_depth = kDefaultMaxDepth;
};

struct PipelineResult {
  RoundedTable rounded;
  Allocation allocation;
  std::vector<std::string> report;
  bool ok = false;
};

// realize -> pad_and_round -> build_allocation -> verify; writes rounded
// table, allocation dump, model echo, and the report under cfg.outdir
// (skipped when outdir is empty).
PipelineResult run_pipeline(const PipelineConfig& cfg);

struct CompressResult {
  std::vector<uint8_t> code_bits;
  std::vector<std::string> report;
};

// Stream-encodes the bits through the allocation; the report lists committed
// versus budgeted bits per prefix, and the code is checked to decode back to
// the input before returning.
CompressResult compress_bits(const Allocation& a, const std::vector<uint8_t>& bits);

// Inverse of compress_bits: the code is the least stem of the target's
// preimage, so apply_map recovers the target exactly.
std::vector<uint8_t> decompress_bits(const Allocation& a,
                                     const std::vector<uint8_t>& code_bits,
                                     std::optional<int> expect_len);

// Reads CONECODE_MAX_DEPTH, defaulting to kDefaultMaxDepth.
int configured_max_depth();

}  // namespace conecode
