#include "hexkit/io/hexa_file.hpp"

#include <cmath>
#include <limits>

#include "hexkit/io/binary.hpp"

namespace hexkit::io {

std::vector<uint8_t> encode_hexa(const HexArray<double>& hex) {
    if (hex.rows() > std::numeric_limits<uint32_t>::max() || hex.cols() > std::numeric_limits<uint32_t>::max() ||
        hex.channels() > std::numeric_limits<uint16_t>::max()) {
        throw std::invalid_argument("encode_hexa: dimensions exceed the format limits");
    }
    ByteWriter w;
    w.bytes("HEXA");
    w.le<uint16_t>(kHexaVersion);
    w.le<uint32_t>(static_cast<uint32_t>(hex.rows()));
    w.le<uint32_t>(static_cast<uint32_t>(hex.cols()));
    w.le<uint16_t>(static_cast<uint16_t>(hex.channels()));
    w.le<double>(hex.spec().pitch());
    for (Eigen::Index i = 0; i < hex.data().size(); ++i) w.le<double>(hex.data()[i]);
    return w.take();
}

HexArray<double> decode_hexa(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    if (r.bytes(4, "magic") != "HEXA") throw FormatError("bad HexaFile magic", 0);
    const uint64_t version_at = r.offset();
    const auto version = r.le<uint16_t>("version");
    if (version != kHexaVersion) throw FormatError("unsupported HexaFile version " + std::to_string(version), version_at);
    const uint64_t dims_at = r.offset();
    const auto rows = r.le<uint32_t>("rows");
    const auto cols = r.le<uint32_t>("cols");
    const auto channels = r.le<uint16_t>("channels");
    if (rows == 0 || cols == 0 || channels == 0) throw FormatError("HexaFile dimensions must be positive", dims_at);
    const uint64_t pitch_at = r.offset();
    const auto pitch = r.le<double>("pitch");
    if (!(pitch > 0.0) || !std::isfinite(pitch)) throw FormatError("HexaFile pitch must be positive", pitch_at);
    const uint64_t count = uint64_t{rows} * cols * channels;
    if (r.remaining() != count * 8) {
        throw FormatError("HexaFile payload holds " + std::to_string(r.remaining()) + " bytes, expected " +
                              std::to_string(count * 8),
                          r.offset());
    }
    HexArray<double> hex(HexGridSpec(rows, cols, pitch), channels);
    for (uint64_t i = 0; i < count; ++i) hex.data()[static_cast<Eigen::Index>(i)] = r.le<double>("sample");
    return hex;
}

void write_hexa(const std::filesystem::path& path, const HexArray<double>& hex) { write_file(path, encode_hexa(hex)); }

HexArray<double> read_hexa(const std::filesystem::path& path) { return decode_hexa(read_file(path)); }

}  // namespace hexkit::io
