#include "conecode/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "conecode/textio.hpp"

namespace conecode {

ScheduleChoice parse_schedule_arg(const std::string& text) {
  ScheduleChoice c;
  if (text == "d=n") {
    c.kind = ScheduleChoice::Kind::margin_linear;
    return c;
  }
  if (text == "d=2log") {
    c.kind = ScheduleChoice::Kind::margin_double_log;
    return c;
  }
  if (text.rfind("budget:slack=", 0) == 0) {
    c.kind = ScheduleChoice::Kind::budget;
    try {
      c.slack = std::stoi(text.substr(13));
    } catch (const std::exception&) {
      fail(Errc::parse_error, "bad slack in schedule: " + text);
    }
    if (c.slack < 0) fail(Errc::parse_error, "slack must be nonnegative");
    return c;
  }
  if (text.rfind("d=", 0) == 0) {
    c.kind = ScheduleChoice::Kind::margin_explicit;
    std::string body = text.substr(2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        c.d.push_back(std::stoi(item));
      } catch (const std::exception&) {
        fail(Errc::parse_error, "bad margin entry: " + item);
      }
    }
    if (c.d.empty()) fail(Errc::parse_error, "empty margin schedule");
    return c;
  }
  fail(Errc::parse_error,
       "cannot parse schedule `" + text +
           "` (expected d=n, d=2log, d=<c0,c1,...>, or budget:slack=<k>)");
}

std::string describe_schedule(const ScheduleChoice& choice) {
  switch (choice.kind) {
    case ScheduleChoice::Kind::margin_linear:
      return "d=n";
    case ScheduleChoice::Kind::margin_double_log:
      return "d=2log";
    case ScheduleChoice::Kind::margin_explicit: {
      std::string out = "d=";
      for (size_t i = 0; i < choice.d.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(choice.d[i]);
      }
      return out;
    }
    case ScheduleChoice::Kind::budget:
      return "budget:slack=" + std::to_string(choice.slack);
  }
  return "?";
}

PadSchedule make_pad_schedule(const ScheduleChoice& choice, const ModelSpec& model,
                              int depth) {
  switch (choice.kind) {
    case ScheduleChoice::Kind::margin_linear:
      return margin_linear(depth);
    case ScheduleChoice::Kind::margin_double_log:
      return margin_double_log(depth);
    case ScheduleChoice::Kind::margin_explicit: {
      if (int(choice.d.size()) != depth + 1)
        fail(Errc::invalid_input, "explicit margin schedule must list D+1 entries");
      return MarginSchedule{choice.d};
    }
    case ScheduleChoice::Kind::budget:
      return budget_schedule_of(model, depth, choice.slack);
  }
  fail(Errc::invalid_input, "unknown schedule choice");
}

void VerifyOutcome::add(const std::string& name, bool pass) {
  checks.push_back({name, pass ? "pass" : "fail"});
  if (!pass) all_pass = false;
}

void VerifyOutcome::skip(const std::string& name) {
  checks.push_back({name, "skipped"});
}

namespace {

// Half-open leaf-index intervals of the cones of x at granularity L.
std::vector<std::pair<uint64_t, uint64_t>> leaf_ranges(const Allocation& a,
                                                       const BitString& x, int L) {
  int g = a.schedule().at(x);
  std::vector<std::pair<uint64_t, uint64_t>> out;
  out.reserve(a.stems(x).size());
  for (uint64_t stem : a.stems(x))
    out.emplace_back(stem << (L - g), (stem + 1) << (L - g));
  return out;
}

bool check_structure(const Allocation& a) {
  for (int n = 0; n <= a.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      const auto& s = a.stems(x);
      int g = a.schedule().at(x);
      if (!std::is_sorted(s.begin(), s.end())) return false;
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
      for (uint64_t stem : s)
        if (g < 64 && (stem >> g) != 0) return false;
    }
  }
  return true;
}

bool check_refinement(const Allocation& a) {
  for (int n = 1; n <= a.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      BitString parent = x.prefix(n - 1);
      int g = a.schedule().at(x);
      int gp = a.schedule().at(parent);
      const auto& ps = a.stems(parent);
      for (uint64_t stem : a.stems(x)) {
        uint64_t pstem = stem >> (g - gp);
        if (!std::binary_search(ps.begin(), ps.end(), pstem)) return false;
      }
    }
  }
  return true;
}

bool check_sibling_disjoint(const Allocation& a) {
  for (int n = 0; n < a.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      BitString c0 = x.appended(0), c1 = x.appended(1);
      int L = std::max(a.schedule().at(c0), a.schedule().at(c1));
      auto r0 = leaf_ranges(a, c0, L);
      auto r1 = leaf_ranges(a, c1, L);
      std::vector<std::pair<uint64_t, uint64_t>> all;
      all.insert(all.end(), r0.begin(), r0.end());
      all.insert(all.end(), r1.begin(), r1.end());
      std::sort(all.begin(), all.end());
      for (size_t i = 1; i < all.size(); ++i)
        if (all[i].first < all[i - 1].second) return false;
    }
  }
  return true;
}

bool check_round_trips(const Allocation& a) {
  for (int n = 0; n <= a.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      if (a.stems(x).empty()) continue;
      BitString code = encode(a, x);
      if (code.length() != a.schedule().at(x)) return false;
      DecodeResult back = decode(a, code, n);
      if (!back.complete || !(back.output == x)) return false;
      if (!(a.apply_map(code) == x)) return false;
    }
  }
  return true;
}

bool check_stream_batch(const Allocation& a) {
  for (int n = 0; n <= a.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      if (a.stems(x).empty()) continue;
      bool covered_path = true;
      for (int i = 1; i < n; ++i)
        if (a.stems(x.prefix(i)).empty()) covered_path = false;
      if (!covered_path) continue;
      CodeStream stream(a);
      for (int i = 0; i < n; ++i) stream.push_target_bit(x.bit(i));
      if (stream.committed().length() > a.schedule().at(x)) return false;
      BitString code = stream.finalize();
      if (!(code == encode(a, x))) return false;
    }
  }
  return true;
}

bool check_brute_force_image(const Allocation& a) {
  int L = a.schedule().max_granularity();
  std::vector<uint64_t> counts((size_t(1) << (a.depth() + 1)) - 1, 0);
  for (uint64_t u = 0; u < (uint64_t(1) << L); ++u) {
    BitString out = a.apply_map(BitString(u, L));
    for (int n = 0; n <= out.length(); ++n)
      counts[SemimeasureTable::node_index(out.prefix(n))]++;
  }
  for (int n = 0; n <= a.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      Dyadic tally(u128(counts[SemimeasureTable::node_index(x)]), L);
      if (!(tally == a.covered_mass(x))) return false;
    }
  }
  return true;
}

bool check_bit_budget(const Allocation& a) {
  int L = a.schedule().max_granularity();
  const auto& sched = a.schedule();
  std::vector<std::pair<uint64_t, int8_t>> outs(size_t(1) << L);
  for (uint64_t u = 0; u < (uint64_t(1) << L); ++u) {
    BitString out = a.apply_map(BitString(u, L));
    outs[u] = {out.value(), int8_t(out.length())};
  }
  if (sched.is_per_length()) {
    // Inputs agreeing on their first g(n) bits agree on their first n
    // output bits (outputs shorter than n must then agree entirely).
    for (int n = 1; n <= a.depth(); ++n) {
      int g = sched.at_length(n);
      std::vector<int> seen_len(size_t(1) << g, -1);
      std::vector<uint64_t> seen_bits(size_t(1) << g, 0);
      for (uint64_t u = 0; u < (uint64_t(1) << L); ++u) {
        auto [obits_full, olen_full] = outs[u];
        int olen = std::min(int(olen_full), n);
        uint64_t obits = obits_full >> (olen_full - olen);
        uint64_t bucket = u >> (L - g);
        if (seen_len[bucket] < 0) {
          seen_len[bucket] = olen;
          seen_bits[bucket] = obits;
        } else if (seen_len[bucket] != olen || seen_bits[bucket] != obits) {
          return false;
        }
      }
    }
    return true;
  }
  // Per-string: the output's own budget determines it — every prefix p of
  // the output is pinned by the input's first g(p) bits.
  for (uint64_t u = 0; u < (uint64_t(1) << L); ++u) {
    BitString input(u, L);
    BitString out(outs[u].first, outs[u].second);
    for (int n = 1; n <= out.length(); ++n) {
      BitString p = out.prefix(n);
      int g = sched.at(p);
      const auto& stems = a.stems(p);
      if (!std::binary_search(stems.begin(), stems.end(), input.prefix(g).value()))
        return false;
    }
  }
  return true;
}

}  // namespace

VerifyOutcome verify_allocation(const Allocation& a, const RoundedTable* expected,
                                VerifyLevel level) {
  VerifyOutcome out;
  if (level == VerifyLevel::exhaustive && a.schedule().max_granularity() > 20)
    fail(Errc::invalid_input,
         "exhaustive verification requires max granularity <= 20");
  out.add("structure", check_structure(a));
  out.add("refinement", check_refinement(a));
  out.add("sibling_disjoint", check_sibling_disjoint(a));
  SemimeasureTable image = a.image_semimeasure(a.depth());
  out.add("image_semimeasure_valid", validate(image).empty());
  if (expected != nullptr) {
    bool equal = expected->table.depth() == a.depth();
    if (equal)
      for (size_t i = 0; i < image.node_count() && equal; ++i)
        equal = image.at_index(i) == expected->table.at_index(i);
    out.add("image_exact", equal);
  }
  out.add("round_trip", check_round_trips(a));
  if (a.depth() <= 10)
    out.add("stream_batch", check_stream_batch(a));
  else
    out.skip("stream_batch");
  if (level == VerifyLevel::exhaustive) {
    out.add("image_brute_force", check_brute_force_image(a));
    out.add("bit_budget", check_bit_budget(a));
  } else {
    out.skip("image_brute_force");
    out.skip("bit_budget");
  }
  return out;
}

namespace {

// Independent recomputation of ceil(-log2 q) by linear comparison against
// powers of two; deliberately avoids Dyadic::neg_log2_ceil.
int neg_log2_ceil_by_search(const Dyadic& q) {
  for (int k = 0; k <= 2 * kMaxExponent; ++k)
    if (q >= Dyadic::two_to_minus(k)) return k;
  fail(Errc::precision_exceeded, "value too small for code-length validation");
}

// Expected stem length per string, recomputed from the config rather than
// taken from the allocation's schedule.
std::vector<int> expected_code_lengths(const PipelineConfig& cfg,
                                       const SemimeasureTable& M) {
  size_t nodes = (size_t(1) << (cfg.depth + 1)) - 1;
  std::vector<int> out(nodes);
  if (cfg.schedule.kind == ScheduleChoice::Kind::budget) {
    for (int n = 0; n <= cfg.depth; ++n) {
      for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
        size_t i = (size_t(1) << n) - 1 + v;
        int t = neg_log2_ceil_by_search(M.at_index(i)) + cfg.schedule.slack;
        if (n > 0) t = std::max(t, out[((i + 1) >> 1) - 1] - 1);
        out[i] = t + 1;
      }
    }
    return out;
  }
  for (int n = 0; n <= cfg.depth; ++n) {
    int d = 0;
    switch (cfg.schedule.kind) {
      case ScheduleChoice::Kind::margin_linear:
        d = n;
        break;
      case ScheduleChoice::Kind::margin_double_log: {
        int c = 0;
        while ((1 << c) < n + 2) ++c;
        d = 2 * c + 1;
        break;
      }
      case ScheduleChoice::Kind::margin_explicit:
        d = cfg.schedule.d[size_t(n)];
        break;
      case ScheduleChoice::Kind::budget:
        break;
    }
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v)
      out[(size_t(1) << n) - 1 + v] = n + d + 1;
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  if (cfg.depth < 0 || cfg.depth > cfg.max_depth)
    fail(Errc::depth_exceeded,
         "depth " + std::to_string(cfg.depth) + " exceeds configured maximum " +
             std::to_string(cfg.max_depth));
  check_model(cfg.model);
  SemimeasureTable M = realize(cfg.model, cfg.depth);
  PadSchedule pad = make_pad_schedule(cfg.schedule, cfg.model, cfg.depth);
  RoundedTable rounded = pad_and_round(M, pad);
  if (cfg.level == VerifyLevel::exhaustive &&
      rounded.schedule.max_granularity() > 20)
    fail(Errc::invalid_input,
         "exhaustive verification requires granularity at depth D <= 20");
  Allocation alloc = build_allocation({rounded});

  VerifyOutcome outcome = verify_allocation(alloc, &rounded, cfg.level);

  bool grid_ok = true, maximal_ok = true;
  for (int n = 0; n <= cfg.depth; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      size_t i = SemimeasureTable::node_index(x);
      const Dyadic& r = rounded.table.at_index(i);
      if (!r.on_grid(rounded.schedule.at(x))) grid_ok = false;
      if (n > 0 && r + r < M.at_index(i)) maximal_ok = false;
    }
  }
  outcome.add("rounded_on_grid", grid_ok);
  outcome.add("maximality_half", maximal_ok);

  std::vector<int> expected_len = expected_code_lengths(cfg, M);
  bool lengths_ok = true;
  for (int n = 0; n <= cfg.depth && lengths_ok; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      if (alloc.stems(x).empty()) continue;
      if (encode(alloc, x).length() != expected_len[SemimeasureTable::node_index(x)]) {
        lengths_ok = false;
        break;
      }
    }
  }
  outcome.add("code_lengths", lengths_ok);

  PipelineResult result{std::move(rounded), std::move(alloc), {}, outcome.all_pass};
  auto& rep = result.report;
  rep.push_back("report pipeline");
  rep.push_back("model " + describe_model(cfg.model));
  rep.push_back("schedule " + describe_schedule(cfg.schedule));
  rep.push_back("depth " + std::to_string(cfg.depth));
  rep.push_back(std::string("level ") +
                (cfg.level == VerifyLevel::exhaustive ? "exhaustive" : "fast"));
  for (const auto& check : outcome.checks)
    rep.push_back("check " + check.name + " " + check.status);
  for (int n = 0; n <= cfg.depth; ++n) {
    uint64_t covered = 0;
    int gmin = 1 << 30, gmax = 0;
    Dyadic mass;
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      if (!result.allocation.stems(x).empty()) {
        ++covered;
        mass += result.allocation.covered_mass(x);
      }
      int g = result.allocation.schedule().at(x);
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
    }
    rep.push_back("length " + std::to_string(n) + " covered " +
                  std::to_string(covered) + " of " +
                  std::to_string(uint64_t(1) << n) + " mass " + mass.str() +
                  " code_bits " +
                  (gmin == gmax ? std::to_string(gmin)
                                : std::to_string(gmin) + ".." + std::to_string(gmax)));
  }
  if (cfg.depth <= 6) {
    for (int n = 0; n <= cfg.depth; ++n) {
      for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
        BitString x = SemimeasureTable::node_string(n, v);
        if (result.allocation.stems(x).empty()) continue;
        size_t i = SemimeasureTable::node_index(x);
        rep.push_back("string " + render_bits(x) + " code_bits " +
                      std::to_string(encode(result.allocation, x).length()) +
                      " neglog2q " +
                      (M.at_index(i).is_zero()
                           ? std::string("inf")
                           : std::to_string(neg_log2_ceil_by_search(M.at_index(i)))) +
                      " rounded " + result.rounded.table.at_index(i).str());
      }
    }
  }
  rep.push_back(std::string("result ") + (result.ok ? "pass" : "fail"));

  if (!cfg.outdir.empty()) {
    std::filesystem::create_directories(cfg.outdir);
    {
      std::ofstream f(cfg.outdir / "model.txt");
      write_model_file(f, cfg.model, cfg.depth);
    }
    {
      std::ofstream f(cfg.outdir / "rounded.txt");
      write_table(f, result.rounded.table);
    }
    {
      std::ofstream f(cfg.outdir / "allocation.txt");
      write_allocation(f, result.allocation);
    }
    {
      std::ofstream f(cfg.outdir / "report.txt");
      for (const auto& line : result.report) f << line << "\n";
    }
  }
  return result;
}

CompressResult compress_bits(const Allocation& a, const std::vector<uint8_t>& bits) {
  if (int(bits.size()) > a.depth())
    fail(Errc::depth_exceeded, "input longer than the allocation depth");
  CompressResult out;
  out.report.push_back("report compress");
  out.report.push_back("input_bits " + std::to_string(bits.size()));
  CodeStream stream(a);
  BitString target;
  out.report.push_back("prefix 0 committed " +
                       std::to_string(stream.committed().length()) + " budget " +
                       std::to_string(a.schedule().at(target)));
  for (size_t i = 0; i < bits.size(); ++i) {
    stream.push_target_bit(bits[i]);
    target = target.appended(bits[i]);
    out.report.push_back("prefix " + std::to_string(i + 1) + " committed " +
                         std::to_string(stream.committed().length()) +
                         " budget " + std::to_string(a.schedule().at(target)));
  }
  BitString code = stream.finalize();
  if (!(code == encode(a, target)))
    fail(Errc::internal_invariant_broken, "stream and batch codes differ");
  out.report.push_back("code_bits " + std::to_string(code.length()));
  for (int i = 0; i < code.length(); ++i) out.code_bits.push_back(uint8_t(code.bit(i)));
  // Round-trip before reporting success.
  auto back = decompress_bits(a, out.code_bits, int(bits.size()));
  if (back != bits) fail(Errc::internal_invariant_broken, "compression round trip failed");
  out.report.push_back("check round_trip pass");
  return out;
}

std::vector<uint8_t> decompress_bits(const Allocation& a,
                                     const std::vector<uint8_t>& code_bits,
                                     std::optional<int> expect_len) {
  if (code_bits.size() > size_t(BitString::kMaxBits))
    fail(Errc::precision_exceeded, "code longer than 64 bits");
  BitString code;
  for (uint8_t b : code_bits) code = code.appended(b);
  BitString out = a.apply_map(code);
  if (expect_len) {
    if (out.length() < *expect_len)
      fail(Errc::not_covered,
           "code determines only " + std::to_string(out.length()) + " of " +
               std::to_string(*expect_len) + " bits");
    out = out.prefix(*expect_len);
  }
  std::vector<uint8_t> bits;
  bits.reserve(size_t(out.length()));
  for (int i = 0; i < out.length(); ++i) bits.push_back(uint8_t(out.bit(i)));
  return bits;
}

int configured_max_depth() {
  const char* env = std::getenv("CONECODE_MAX_DEPTH");
  if (env == nullptr) return kDefaultMaxDepth;
  try {
    int v = std::stoi(env);
    if (v < 0 || v > kMaxTableDepth)
      fail(Errc::depth_exceeded, "CONECODE_MAX_DEPTH outside 0.." +
                                     std::to_string(kMaxTableDepth));
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::parse_error, "CONECODE_MAX_DEPTH is not an integer");
  }
}

}  // namespace conecode
