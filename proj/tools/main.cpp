// conecode CLI: model realization -> rounding -> cone allocation ->
// encode/decode/verify, with reproducible text outputs.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "conecode/bitio.hpp"
#include "conecode/pipeline.hpp"
#include "conecode/textio.hpp"

namespace cc = conecode;

namespace {

struct ModelArgs {
  std::string model_arg;
  std::string schedule_arg = "d=n";
  int depth = -1;
};

cc::ModelSpec load_model(const ModelArgs& args, int& depth) {
  cc::ModelSpec spec;
  if (std::filesystem::exists(args.model_arg)) {
    std::ifstream in(args.model_arg);
    if (!in) cc::fail(cc::Errc::io_error, "cannot open " + args.model_arg);
    cc::ModelFile file = cc::parse_model_file(in);
    spec = file.spec;
    depth = args.depth >= 0 ? args.depth : file.depth;
  } else {
    spec = cc::parse_model_inline(args.model_arg);
    if (args.depth < 0)
      cc::fail(cc::Errc::invalid_input, "--depth is required with an inline model");
    depth = args.depth;
  }
  int max_depth = cc::configured_max_depth();
  if (depth < 0 || depth > max_depth)
    cc::fail(cc::Errc::depth_exceeded,
             "depth " + std::to_string(depth) + " exceeds configured maximum " +
                 std::to_string(max_depth));
  return spec;
}

cc::RoundedTable round_from_args(const ModelArgs& args, cc::ModelSpec& spec_out,
                                 int& depth_out) {
  spec_out = load_model(args, depth_out);
  cc::PadSchedule pad = cc::make_pad_schedule(cc::parse_schedule_arg(args.schedule_arg),
                                              spec_out, depth_out);
  return cc::pad_and_round(cc::realize(spec_out, depth_out), pad);
}

cc::Allocation load_allocation(const std::string& path) {
  std::ifstream in(path);
  if (!in) cc::fail(cc::Errc::io_error, "cannot open " + path);
  return cc::read_allocation(in);
}

cc::VerifyLevel parse_level(const std::string& s) {
  if (s == "fast") return cc::VerifyLevel::fast;
  if (s == "exhaustive") return cc::VerifyLevel::exhaustive;
  cc::fail(cc::Errc::parse_error, "level must be fast or exhaustive");
}

void write_text_file(const std::filesystem::path& path,
                     const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) cc::fail(cc::Errc::io_error, "cannot open " + path.string());
  for (const auto& line : lines) out << line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cone-allocation pipelines over exact dyadic semimeasures"};
  app.require_subcommand(1);

  ModelArgs margs;
  std::string alloc_path, table_path, out_path, outdir, in_path, report_path;
  std::string target_bits, code_bits_arg, alpha_bits, test_path, bound_arg;
  std::string level_arg = "fast";
  int decode_len = -1;
  std::optional<int> expect_len;
  bool stream_mode = false, raw_input = false, raw_output = false;

  auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--model", margs.model_arg,
                    "model config file or inline spec (uniform, "
                    "bernoulli=<m>/2^<e>, geometric=<m>/2^<e>)")
        ->required();
    cmd->add_option("--schedule", margs.schedule_arg,
                    "d=n | d=2log | d=<c0,c1,...> | budget:slack=<k>");
    cmd->add_option("--depth", margs.depth, "table depth D");
  };

  auto* round_cmd = app.add_subcommand("round", "pad and round a model's semimeasure");
  add_model_flags(round_cmd);
  round_cmd->add_option("--out", out_path, "rounded table file")->required();

  auto* alloc_cmd = app.add_subcommand("allocate", "build the cone allocation");
  add_model_flags(alloc_cmd);
  alloc_cmd->add_option("--out", out_path, "allocation dump file")->required();

  auto* encode_cmd = app.add_subcommand("encode", "code a target string");
  encode_cmd->add_option("--alloc", alloc_path, "allocation dump")->required();
  encode_cmd->add_option("--target", target_bits, "target bits")->required();
  encode_cmd->add_flag("--stream", stream_mode, "feed bits one at a time");
  encode_cmd->add_option("--out", out_path, "packed bitstream output");

  auto* decode_cmd = app.add_subcommand("decode", "decode a code string");
  decode_cmd->add_option("--alloc", alloc_path, "allocation dump")->required();
  decode_cmd->add_option("--code", code_bits_arg, "code bits");
  decode_cmd->add_option("--in", in_path, "packed bitstream input");
  decode_cmd->add_option("--len", decode_len, "requested output length")->required();

  auto* verify_cmd = app.add_subcommand("verify", "check allocation invariants");
  verify_cmd->add_option("--alloc", alloc_path, "allocation dump")->required();
  verify_cmd->add_option("--table", table_path, "expected rounded table");
  verify_cmd->add_option("--level", level_arg, "fast | exhaustive");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "run the full pipeline");
  add_model_flags(pipeline_cmd);
  pipeline_cmd->add_option("--outdir", outdir, "output directory")->required();
  pipeline_cmd->add_option("--level", level_arg, "fast | exhaustive");

  auto* compress_cmd = app.add_subcommand("compress", "stream-encode a file");
  add_model_flags(compress_cmd);
  compress_cmd->add_option("--alloc", alloc_path, "use a prebuilt allocation");
  compress_cmd->add_option("--in", in_path, "input file")->required();
  compress_cmd->add_option("--out", out_path, "packed code output")->required();
  compress_cmd->add_option("--report", report_path, "write the compression report");
  compress_cmd->add_flag("--raw-input", raw_input,
                         "treat input as raw bytes instead of a bitstream file");

  auto* decompress_cmd = app.add_subcommand("decompress", "invert compress");
  add_model_flags(decompress_cmd);
  decompress_cmd->add_option("--alloc", alloc_path, "use a prebuilt allocation");
  decompress_cmd->add_option("--in", in_path, "packed code input")->required();
  decompress_cmd->add_option("--out", out_path, "output file")->required();
  decompress_cmd->add_option("--len", expect_len, "expected bit count");
  decompress_cmd->add_flag("--raw-output", raw_output,
                           "write raw bytes instead of a bitstream file");

  auto* witness_cmd = app.add_subcommand("witness", "verify the averaging lemma");
  witness_cmd->add_option("--alloc", alloc_path, "allocation dump")->required();
  witness_cmd->add_option("--alpha", alpha_bits, "target sequence prefix")->required();
  witness_cmd->add_option("--test", test_path, "test assignment file")->required();
  witness_cmd->add_option("--bound", bound_arg, "dyadic bound C as <m>/2^<e>");

  // compress/decompress accept either a model or a prebuilt allocation.
  compress_cmd->get_option("--model")->required(false);
  decompress_cmd->get_option("--model")->required(false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (round_cmd->parsed()) {
      cc::ModelSpec spec;
      int depth = 0;
      cc::RoundedTable rounded = round_from_args(margs, spec, depth);
      std::ofstream out(out_path);
      if (!out) cc::fail(cc::Errc::io_error, "cannot open " + out_path);
      cc::write_table(out, rounded.table);
      std::cout << "rounded depth " << depth << " model "
                << cc::describe_model(spec) << " schedule " << margs.schedule_arg
                << "\n";
      return 0;
    }

    if (alloc_cmd->parsed()) {
      cc::ModelSpec spec;
      int depth = 0;
      cc::RoundedTable rounded = round_from_args(margs, spec, depth);
      cc::Allocation a = cc::build_allocation({rounded});
      std::ofstream out(out_path);
      if (!out) cc::fail(cc::Errc::io_error, "cannot open " + out_path);
      cc::write_allocation(out, a);
      std::cout << "allocated depth " << depth << " max_code_bits "
                << a.schedule().max_granularity() << "\n";
      return 0;
    }

    if (encode_cmd->parsed()) {
      cc::Allocation a = load_allocation(alloc_path);
      cc::BitString target = cc::BitString::parse(target_bits);
      cc::BitString code;
      if (stream_mode) {
        cc::CodeStream stream(a);
        for (int i = 0; i < target.length(); ++i) {
          cc::BitString fresh = stream.push_target_bit(target.bit(i));
          std::cout << "prefix " << cc::render_bits(target.prefix(i + 1))
                    << " committed "
                    << (stream.committed().empty() ? "-" : stream.committed().str())
                    << (fresh.empty() ? "" : " new " + fresh.str()) << "\n";
        }
        code = stream.finalize();
      } else {
        code = cc::encode(a, target);
      }
      std::cout << "code " << code.str() << "\n";
      if (!out_path.empty()) {
        std::vector<uint8_t> bits;
        for (int i = 0; i < code.length(); ++i) bits.push_back(uint8_t(code.bit(i)));
        cc::write_bitstream_file(out_path, bits);
      }
      return 0;
    }

    if (decode_cmd->parsed()) {
      cc::Allocation a = load_allocation(alloc_path);
      cc::BitString code;
      if (!code_bits_arg.empty()) {
        code = cc::BitString::parse(code_bits_arg);
      } else if (!in_path.empty()) {
        auto bits = cc::read_bitstream_file(in_path);
        for (uint8_t b : bits) code = code.appended(b);
      } else {
        cc::fail(cc::Errc::invalid_input, "decode needs --code or --in");
      }
      cc::DecodeResult r = cc::decode(a, code, decode_len);
      if (r.complete) {
        std::cout << "decoded " << cc::render_bits(r.output) << "\n";
      } else {
        std::cout << "underdetermined " << r.determined_depth << " decoded "
                  << cc::render_bits(r.output) << "\n";
      }
      return 0;
    }

    if (verify_cmd->parsed()) {
      cc::Allocation a = load_allocation(alloc_path);
      cc::VerifyOutcome outcome;
      if (!table_path.empty()) {
        std::ifstream in(table_path);
        if (!in) cc::fail(cc::Errc::io_error, "cannot open " + table_path);
        cc::RoundedTable expected{cc::read_table(in), a.schedule()};
        outcome = cc::verify_allocation(a, &expected, parse_level(level_arg));
      } else {
        outcome = cc::verify_allocation(a, nullptr, parse_level(level_arg));
      }
      for (const auto& check : outcome.checks)
        std::cout << "check " << check.name << " " << check.status << "\n";
      std::cout << "result " << (outcome.all_pass ? "pass" : "fail") << "\n";
      return outcome.all_pass ? 0 : 1;
    }

    if (pipeline_cmd->parsed()) {
      cc::PipelineConfig cfg;
      cfg.model = load_model(margs, cfg.depth);
      cfg.schedule = cc::parse_schedule_arg(margs.schedule_arg);
      cfg.outdir = outdir;
      cfg.level = parse_level(level_arg);
      cfg.max_depth = cc::configured_max_depth();
      cc::PipelineResult result = cc::run_pipeline(cfg);
      for (const auto& line : result.report) std::cout << line << "\n";
      return result.ok ? 0 : 1;
    }

    if (compress_cmd->parsed() || decompress_cmd->parsed()) {
      cc::Allocation a = [&]() {
        if (!alloc_path.empty()) return load_allocation(alloc_path);
        if (margs.model_arg.empty())
          cc::fail(cc::Errc::invalid_input, "need --model or --alloc");
        cc::ModelSpec spec;
        int depth = 0;
        cc::RoundedTable rounded = round_from_args(margs, spec, depth);
        return cc::build_allocation({rounded});
      }();
      if (compress_cmd->parsed()) {
        std::vector<uint8_t> bits;
        if (raw_input) {
          std::ifstream in(in_path, std::ios::binary);
          if (!in) cc::fail(cc::Errc::io_error, "cannot open " + in_path);
          std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
          bits = cc::bytes_to_bits(bytes);
        } else {
          bits = cc::read_bitstream_file(in_path);
        }
        cc::CompressResult result = cc::compress_bits(a, bits);
        cc::write_bitstream_file(out_path, result.code_bits);
        for (const auto& line : result.report) std::cout << line << "\n";
        if (!report_path.empty()) write_text_file(report_path, result.report);
        return 0;
      }
      auto code = cc::read_bitstream_file(in_path);
      auto bits = cc::decompress_bits(a, code, expect_len);
      if (raw_output) {
        auto bytes = cc::bits_to_bytes(bits);
        std::ofstream out(out_path, std::ios::binary);
        if (!out) cc::fail(cc::Errc::io_error, "cannot open " + out_path);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  std::streamsize(bytes.size()));
      } else {
        cc::write_bitstream_file(out_path, bits);
      }
      std::cout << "decompressed_bits " << bits.size() << "\n";
      return 0;
    }

    if (witness_cmd->parsed()) {
      cc::Allocation a = load_allocation(alloc_path);
      std::ifstream in(test_path);
      if (!in) cc::fail(cc::Errc::io_error, "cannot open " + test_path);
      cc::TestAssignment t = cc::read_test_assignment(in);
      cc::BitString alpha = cc::BitString::parse(alpha_bits);
      cc::Dyadic bound;
      if (!bound_arg.empty()) {
        bound = cc::Dyadic::parse(bound_arg);
      } else {
        // Tight achievable bound: max over prefixes of tau(U)/P(U), rounded
        // up to the 2^-32 grid.
        for (int i = 0; i <= alpha.length(); ++i) {
          cc::PreimageMass mass = cc::preimage_mass(a, alpha.prefix(i), t);
          if (mass.space_mass.is_zero())
            cc::fail(cc::Errc::not_covered,
                     "alpha prefix has empty preimage: " +
                         cc::render_bits(alpha.prefix(i)));
          cc::Dyadic tight =
              cc::dyadic_upper_ratio(mass.test_mass, mass.space_mass, 32);
          if (tight > bound) bound = tight;
        }
        std::cout << "bound " << bound.str() << "\n";
      }
      cc::WitnessChain chain = cc::verify_nested_witnesses(a, alpha, t, bound);
      for (const auto& entry : chain.entries) {
        std::cout << "witness " << cc::render_bits(entry.prefix) << " leaf "
                  << entry.witness.leaf.stem.str() << " test "
                  << entry.witness.value.str() << " test_mass "
                  << entry.test_mass.str() << " space_mass "
                  << entry.space_mass.str() << "\n";
      }
      std::cout << "omega_star " << chain.omega_star.leaf.stem.str() << " test "
                << chain.omega_star.value.str() << "\n";
      return 0;
    }
  } catch (const cc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
