#include "hexkit/io/idx.hpp"

#include "hexkit/io/binary.hpp"

namespace hexkit::io {

std::vector<SquareImage<uint8_t>> decode_idx_images(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    const auto magic = r.be<uint32_t>("image magic");
    if (magic != kIdxImageMagic) throw FormatError("bad IDX image magic", 0);
    const auto count = r.be<uint32_t>("image count");
    const auto rows = r.be<uint32_t>("row count");
    const auto cols = r.be<uint32_t>("column count");
    const uint64_t pixels = uint64_t{rows} * cols;
    if (r.remaining() < pixels * count) {
        throw FormatError("IDX image payload truncated: expected " + std::to_string(pixels * count) + " bytes, found " +
                              std::to_string(r.remaining()),
                          r.offset() + r.remaining());
    }
    std::vector<SquareImage<uint8_t>> out;
    out.reserve(count);
    for (uint32_t n = 0; n < count; ++n) {
        SquareImage<uint8_t> img(cols, rows, 1);
        std::copy(r.current(), r.current() + pixels, img.data().data());
        r.skip(pixels, "pixels");
        out.push_back(std::move(img));
    }
    return out;
}

std::vector<int> decode_idx_labels(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    const auto magic = r.be<uint32_t>("label magic");
    if (magic != kIdxLabelMagic) throw FormatError("bad IDX label magic", 0);
    const auto count = r.be<uint32_t>("label count");
    if (r.remaining() < count) {
        throw FormatError("IDX label payload truncated: expected " + std::to_string(count) + " bytes, found " +
                              std::to_string(r.remaining()),
                          r.offset() + r.remaining());
    }
    std::vector<int> out(count);
    for (uint32_t i = 0; i < count; ++i) out[i] = r.current()[i];
    return out;
}

std::vector<uint8_t> encode_idx_images(const std::vector<SquareImage<uint8_t>>& images) {
    ByteWriter w;
    w.be<uint32_t>(kIdxImageMagic);
    w.be<uint32_t>(static_cast<uint32_t>(images.size()));
    const int64_t rows = images.empty() ? 0 : images.front().height();
    const int64_t cols = images.empty() ? 0 : images.front().width();
    w.be<uint32_t>(static_cast<uint32_t>(rows));
    w.be<uint32_t>(static_cast<uint32_t>(cols));
    auto out = w.take();
    for (const auto& img : images) {
        if (img.height() != rows || img.width() != cols || img.channels() != 1) {
            throw std::invalid_argument("encode_idx_images: images must share one single-channel size");
        }
        out.insert(out.end(), img.data().data(), img.data().data() + img.data().size());
    }
    return out;
}

std::vector<uint8_t> encode_idx_labels(const std::vector<int>& labels) {
    ByteWriter w;
    w.be<uint32_t>(kIdxLabelMagic);
    w.be<uint32_t>(static_cast<uint32_t>(labels.size()));
    auto out = w.take();
    for (int l : labels) out.push_back(static_cast<uint8_t>(l));
    return out;
}

LabeledImages ingest_mnist(const std::filesystem::path& images, const std::filesystem::path& labels) {
    LabeledImages out;
    out.images = decode_idx_images(read_file(images));
    out.labels = decode_idx_labels(read_file(labels));
    if (out.images.size() != out.labels.size()) {
        throw FormatError("IDX image/label count mismatch: " + std::to_string(out.images.size()) + " images, " +
                              std::to_string(out.labels.size()) + " labels",
                          4);
    }
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
        if (out.labels[i] < 0 || out.labels[i] > 9) {
            throw FormatError("IDX label out of range 0-9", 8 + i);
        }
    }
    return out;
}

}  // namespace hexkit::io
