#pragma once

#include <filesystem>
#include <vector>

#include "hexkit/image.hpp"

namespace hexkit::io {

inline constexpr uint32_t kIdxImageMagic = 0x00000803;
inline constexpr uint32_t kIdxLabelMagic = 0x00000801;

struct LabeledImages {
    std::vector<SquareImage<uint8_t>> images;
    std::vector<int> labels;
};

// Big-endian IDX payloads as used by MNIST.
std::vector<SquareImage<uint8_t>> decode_idx_images(const std::vector<uint8_t>& bytes);
std::vector<int> decode_idx_labels(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_idx_images(const std::vector<SquareImage<uint8_t>>& images);
std::vector<uint8_t> encode_idx_labels(const std::vector<int>& labels);

LabeledImages ingest_mnist(const std::filesystem::path& images, const std::filesystem::path& labels);

}  // namespace hexkit::io
