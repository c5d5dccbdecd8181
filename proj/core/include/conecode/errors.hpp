#pragma once

#include <stdexcept>
#include <string>

namespace conecode {

enum class Errc {
  non_positive,
  depth_exceeded,
  precision_exceeded,
  weight_overflow,
  not_dyadic,
  zero_mass,
  invalid_input,
  schedule_not_monotone,
  not_monotone_stages,
  internal_invariant_broken,
  not_covered,
  stream_finalized,
  bound_violated,
  parse_error,
  io_error,
};

// Stable names used in CLI diagnostics and tests.
const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace conecode
