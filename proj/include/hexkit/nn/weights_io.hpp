#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hexkit/nn/model.hpp"

namespace hexkit::nn {

// "HXNN", u16 version, u32 tensor count, then per tensor: u32 name length,
// name, u32 rank, u64 dims, little-endian f64 values.
std::vector<uint8_t> encode_weights(Network& net);
// Throws ShapeError when names or dimensions disagree with the network.
void decode_weights(Network& net, const std::vector<uint8_t>& bytes);

void save_weights(Network& net, const std::filesystem::path& path);
void load_weights(Network& net, const std::filesystem::path& path);

}  // namespace hexkit::nn
