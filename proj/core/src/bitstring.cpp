#include "conecode/bitstring.hpp"

namespace conecode {

BitString BitString::parse(std::string_view s) {
  if (s == "-") return BitString();
  BitString out;
  for (char c : s) {
    if (c != '0' && c != '1')
      fail(Errc::parse_error, "bad bit string: " + std::string(s));
    out = out.appended(c - '0');
  }
  return out;
}

}  // namespace conecode
