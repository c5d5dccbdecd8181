#pragma once

// Packed bitstream files: an 8-byte little-endian bit count followed by the
// bits packed most-significant-bit first.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace conecode {

std::vector<uint8_t> pack_bits(const std::vector<uint8_t>& bits);
std::vector<uint8_t> unpack_bits(const std::vector<uint8_t>& bytes, uint64_t bit_count);

void write_bitstream_file(const std::filesystem::path& path,
                          const std::vector<uint8_t>& bits);
std::vector<uint8_t> read_bitstream_file(const std::filesystem::path& path);

// Raw byte <-> bit views, most-significant-bit first.
std::vector<uint8_t> bytes_to_bits(const std::vector<uint8_t>& bytes);
// Requires a multiple of 8 bits.
std::vector<uint8_t> bits_to_bytes(const std::vector<uint8_t>& bits);

}  // namespace conecode
