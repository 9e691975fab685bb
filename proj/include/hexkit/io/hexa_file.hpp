#pragma once

#include <filesystem>
#include <vector>

#include "hexkit/grid.hpp"

namespace hexkit::io {

// HexaFile layout, all little-endian:
//   "HEXA" | u16 version (1) | u32 rows | u32 cols | u16 channels | f64 pitch
//   | rows * cols * channels f64 samples, linewise row-major, channels innermost
inline constexpr uint16_t kHexaVersion = 1;

std::vector<uint8_t> encode_hexa(const HexArray<double>& hex);
HexArray<double> decode_hexa(const std::vector<uint8_t>& bytes);

void write_hexa(const std::filesystem::path& path, const HexArray<double>& hex);
HexArray<double> read_hexa(const std::filesystem::path& path);

}  // namespace hexkit::io
