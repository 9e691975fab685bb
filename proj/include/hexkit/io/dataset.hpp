#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hexkit/image.hpp"
#include "hexkit/io/idx.hpp"
#include "hexkit/nn/model.hpp"
#include "hexkit/nn/train.hpp"
#include "hexkit/transform.hpp"

namespace hexkit::io {

struct LabeledDataset {
    std::vector<Image> images;
    std::vector<int> labels;
    std::vector<std::string> names;    // path relative to the dataset root
    std::vector<std::string> classes;  // label -> class name
    std::vector<bool> is_test;

    std::size_t size() const { return images.size(); }
};

// FNV-1a hash split: roughly one in five names lands in the test split.
bool hashed_test_split(const std::string& name);

// One subdirectory per class, sorted lexicographically. A root holding
// train/ and test/ subdirectories uses that split; otherwise the hash split.
LabeledDataset ingest_image_dir(const std::filesystem::path& root);

LabeledDataset from_mnist(const LabeledImages& mnist, bool test_split);

// Converts images to network inputs in [0, 1]: square models get a resize to
// their input size, hexagonal models an s2h onto a grid spanning the image.
nn::Samples to_samples(const std::vector<Image>& images, const std::vector<int>& labels, const nn::ModelSpec& model,
                       InterpMode mode, int threads = 1);

bool is_hexagonal(const nn::ModelSpec& model);

}  // namespace hexkit::io
