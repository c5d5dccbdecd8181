#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "conecode/bitio.hpp"

namespace fs = std::filesystem;

namespace {

fs::path cli_path() {
  const char* env = std::getenv("CONECODE_CLI");
  REQUIRE_MESSAGE(env != nullptr, "CONECODE_CLI must point at the CLI binary");
  return fs::path(env);
}

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  fs::path dir = fs::temp_directory_path() / "conecode_cli_io";
  fs::create_directories(dir);
  fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  std::string cmd = env_prefix + cli_path().string() + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = raw < 0 ? raw : WEXITSTATUS(raw);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "conecode_cli_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("round, allocate, encode, decode chain through files") {
  TempDir dir;
  auto rounded = run("round --model uniform --schedule d=n --depth 2 --out " +
                     dir.file("rounded.txt"));
  CHECK(rounded.status == 0);
  std::string table = slurp(dir.file("rounded.txt"));
  CHECK(table.find("depth 2") == 0);
  CHECK(table.find("0 3/2^3") != std::string::npos);

  auto alloc = run("allocate --model uniform --schedule d=n --depth 2 --out " +
                   dir.file("alloc.txt"));
  CHECK(alloc.status == 0);

  auto enc = run("encode --alloc " + dir.file("alloc.txt") +
                 " --target 01 --out " + dir.file("code.bits"));
  CHECK(enc.status == 0);
  CHECK(enc.out.find("code 00100") != std::string::npos);

  auto dec = run("decode --alloc " + dir.file("alloc.txt") +
                 " --in " + dir.file("code.bits") + " --len 2");
  CHECK(dec.status == 0);
  CHECK(dec.out.find("decoded 01") != std::string::npos);

  auto dec_inline =
      run("decode --alloc " + dir.file("alloc.txt") + " --code 00100 --len 2");
  CHECK(dec_inline.out.find("decoded 01") != std::string::npos);

  auto verify = run("verify --alloc " + dir.file("alloc.txt") +
                    " --table " + dir.file("rounded.txt") + " --level exhaustive");
  CHECK(verify.status == 0);
  CHECK(verify.out.find("check image_exact pass") != std::string::npos);
  CHECK(verify.out.find("result pass") != std::string::npos);
}

TEST_CASE("stream encode reports per-prefix commits") {
  TempDir dir;
  REQUIRE(run("allocate --model uniform --schedule d=n --depth 1 --out " +
              dir.file("alloc.txt")).status == 0);
  auto enc = run("encode --alloc " + dir.file("alloc.txt") + " --target 0 --stream");
  CHECK(enc.status == 0);
  CHECK(enc.out.find("prefix 0 committed 00") != std::string::npos);
  CHECK(enc.out.find("code 000") != std::string::npos);
}

TEST_CASE("pipeline subcommand writes a deterministic report tree") {
  TempDir dir;
  std::string args = "pipeline --model bernoulli=3/2^2 --schedule d=n --depth 3 "
                     "--level exhaustive --outdir " + dir.file("out");
  auto first = run(args);
  CHECK(first.status == 0);
  CHECK(first.out.find("check image_brute_force pass") != std::string::npos);
  CHECK(first.out.find("result pass") != std::string::npos);
  std::string report = slurp(dir.file("out") + "/report.txt");
  std::string rounded = slurp(dir.file("out") + "/rounded.txt");
  fs::remove_all(dir.file("out"));
  auto second = run(args);
  CHECK(second.status == 0);
  CHECK(slurp(dir.file("out") + "/report.txt") == report);
  CHECK(slurp(dir.file("out") + "/rounded.txt") == rounded);
}

TEST_CASE("model config files feed every subcommand") {
  TempDir dir;
  {
    std::ofstream model(dir.file("model.txt"));
    model << "depth 4\nkind mixture 2\nweight 1/2^1\nkind uniform\n"
             "weight 1/2^1\nkind geometric 1/2^2\n";
  }
  auto result = run("pipeline --model " + dir.file("model.txt") +
                    " --schedule d=2log --outdir " + dir.file("out"));
  CHECK(result.status == 0);
  CHECK(result.out.find("model mixture[1/2^1*uniform,1/2^1*geometric(1/2^2)]") !=
        std::string::npos);
  CHECK(result.out.find("depth 4") != std::string::npos);
}

TEST_CASE("schedule violations exit nonzero with the error name") {
  TempDir dir;
  auto result = run("round --model uniform --schedule d=5,0,0 --depth 2 --out " +
                    dir.file("r.txt"));
  CHECK(result.status != 0);
  CHECK(result.err.find("ScheduleNotMonotone") != std::string::npos);
}

TEST_CASE("uncovered targets exit nonzero with NotCovered") {
  TempDir dir;
  // bernoulli(1) gives zero mass to anything containing a 0; at full depth
  // the rounded leaf value underflows to zero, so some targets are uncovered.
  REQUIRE(run("allocate --model bernoulli=1/2^0 --schedule d=n --depth 2 --out " +
              dir.file("alloc.txt")).status == 0);
  auto result = run("encode --alloc " + dir.file("alloc.txt") + " --target 00");
  CHECK(result.status != 0);
  CHECK(result.err.find("NotCovered") != std::string::npos);
}

TEST_CASE("compress and decompress invert through files") {
  TempDir dir;
  conecode::write_bitstream_file(dir.file("input.bits"),
                                 {1, 0, 1, 1, 0, 1, 0, 0, 1, 1});
  std::string model = "--model bernoulli=3/2^2 --schedule budget:slack=4 --depth 12";
  auto comp = run("compress " + model + " --in " + dir.file("input.bits") +
                  " --out " + dir.file("code.bits") + " --report " +
                  dir.file("creport.txt"));
  CHECK(comp.status == 0);
  CHECK(comp.out.find("check round_trip pass") != std::string::npos);
  CHECK(slurp(dir.file("creport.txt")).find("input_bits 10") != std::string::npos);
  auto decomp = run("decompress " + model + " --in " + dir.file("code.bits") +
                    " --out " + dir.file("back.bits") + " --len 10");
  CHECK(decomp.status == 0);
  CHECK(conecode::read_bitstream_file(dir.file("back.bits")) ==
        std::vector<uint8_t>{1, 0, 1, 1, 0, 1, 0, 0, 1, 1});

  // Raw byte mode: one byte in, one byte out.
  {
    std::ofstream raw(dir.file("raw.bin"), std::ios::binary);
    raw << char(0xA5);
  }
  auto comp_raw = run("compress --raw-input " + model + " --in " + dir.file("raw.bin") +
                      " --out " + dir.file("rawcode.bits"));
  CHECK(comp_raw.status == 0);
  auto decomp_raw = run("decompress --raw-output " + model + " --in " +
                        dir.file("rawcode.bits") + " --out " + dir.file("rawback.bin") +
                        " --len 8");
  CHECK(decomp_raw.status == 0);
  CHECK(slurp(dir.file("rawback.bin")) == std::string(1, char(0xA5)));
}

TEST_CASE("witness subcommand reports the chain and tight bounds") {
  TempDir dir;
  REQUIRE(run("allocate --model uniform --schedule d=n --depth 2 --out " +
              dir.file("alloc.txt")).status == 0);
  {
    // Constant test t = 1 at leaf granularity g(2) = 5.
    std::ofstream test(dir.file("test.txt"));
    test << "leafbits 5\n";
    for (int leaf = 0; leaf < 32; ++leaf) {
      for (int b = 4; b >= 0; --b) test << ((leaf >> b) & 1);
      test << " 1/2^0\n";
    }
  }
  auto with_bound = run("witness --alloc " + dir.file("alloc.txt") +
                        " --alpha 01 --test " + dir.file("test.txt") +
                        " --bound 1/2^0");
  CHECK(with_bound.status == 0);
  CHECK(with_bound.out.find("omega_star") != std::string::npos);
  auto tight = run("witness --alloc " + dir.file("alloc.txt") + " --alpha 01 --test " +
                   dir.file("test.txt"));
  CHECK(tight.status == 0);
  CHECK(tight.out.find("bound ") != std::string::npos);
  auto violated = run("witness --alloc " + dir.file("alloc.txt") +
                      " --alpha 01 --test " + dir.file("test.txt") +
                      " --bound 1/2^4");
  CHECK(violated.status != 0);
  CHECK(violated.err.find("BoundViolated") != std::string::npos);
}

TEST_CASE("the max-depth environment override is honored") {
  TempDir dir;
  auto result = run("round --model uniform --schedule d=n --depth 6 --out " +
                    dir.file("r.txt"), "CONECODE_MAX_DEPTH=4 ");
  CHECK(result.status != 0);
  CHECK(result.err.find("DepthExceeded") != std::string::npos);
  auto ok = run("round --model uniform --schedule d=n --depth 4 --out " +
                dir.file("r.txt"), "CONECODE_MAX_DEPTH=4 ");
  CHECK(ok.status == 0);
}

TEST_SUITE_END();
