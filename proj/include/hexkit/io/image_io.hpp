#pragma once

#include <filesystem>

#include "hexkit/image.hpp"

namespace hexkit::io {

// PNG (gray or RGB; alpha is dropped) and binary PGM/PPM (P5/P6, maxval 255).
// Samples are returned as doubles in [0, 255].
Image read_image(const std::filesystem::path& path);

// Writes by extension: .png, .pgm (1 channel) or .ppm (3 channels). Samples
// are rounded and clamped to 8 bits.
void write_image(const std::filesystem::path& path, const Image& img);

Image decode_pnm(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> encode_pnm(const Image& img);

}  // namespace hexkit::io
