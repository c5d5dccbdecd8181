#include "conecode/bitio.hpp"

#include <fstream>

#include "conecode/errors.hpp"

namespace conecode {

std::vector<uint8_t> pack_bits(const std::vector<uint8_t>& bits) {
  std::vector<uint8_t> out((bits.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= uint8_t(0x80u >> (i % 8));
  return out;
}

std::vector<uint8_t> unpack_bits(const std::vector<uint8_t>& bytes,
                                 uint64_t bit_count) {
  if (bit_count > bytes.size() * 8)
    fail(Errc::parse_error, "bit count exceeds packed payload");
  std::vector<uint8_t> bits(bit_count);
  for (uint64_t i = 0; i < bit_count; ++i)
    bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
  return bits;
}

void write_bitstream_file(const std::filesystem::path& path,
                          const std::vector<uint8_t>& bits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  uint64_t count = bits.size();
  uint8_t header[8];
  for (int i = 0; i < 8; ++i) header[i] = uint8_t(count >> (8 * i));
  out.write(reinterpret_cast<const char*>(header), 8);
  auto packed = pack_bits(bits);
  out.write(reinterpret_cast<const char*>(packed.data()),
            std::streamsize(packed.size()));
  if (!out) fail(Errc::io_error, "write failed: " + path.string());
}

std::vector<uint8_t> read_bitstream_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  uint8_t header[8];
  in.read(reinterpret_cast<char*>(header), 8);
  if (in.gcount() != 8) fail(Errc::parse_error, "truncated bitstream header");
  uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= uint64_t(header[i]) << (8 * i);
  std::vector<uint8_t> payload((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
  return unpack_bits(payload, count);
}

std::vector<uint8_t> bytes_to_bits(const std::vector<uint8_t>& bytes) {
  std::vector<uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (uint8_t b : bytes)
    for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
  return bits;
}

std::vector<uint8_t> bits_to_bytes(const std::vector<uint8_t>& bits) {
  if (bits.size() % 8 != 0)
    fail(Errc::invalid_input, "bit count is not a whole number of bytes");
  return pack_bits(bits);
}

}  // namespace conecode
