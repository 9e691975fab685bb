#include "hexkit/nn/weights_io.hpp"

#include "hexkit/io/binary.hpp"

namespace hexkit::nn {

namespace {
constexpr uint16_t kVersion = 1;

std::string dims_str(const std::vector<int64_t>& dims) {
    std::string s = "[";
    for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "x" : "") + std::to_string(dims[i]);
    return s + "]";
}
}

std::vector<uint8_t> encode_weights(Network& net) {
    const auto params = net.params();
    io::ByteWriter w;
    w.bytes("HXNN");
    w.le<uint16_t>(kVersion);
    w.le<uint32_t>(static_cast<uint32_t>(params.size()));
    for (const auto& p : params) {
        w.le<uint32_t>(static_cast<uint32_t>(p.name.size()));
        w.bytes(p.name);
        w.le<uint32_t>(static_cast<uint32_t>(p.dims.size()));
        for (int64_t d : p.dims) w.le<uint64_t>(static_cast<uint64_t>(d));
        for (int64_t i = 0; i < p.size; ++i) w.le<double>(p.value[i]);
    }
    return w.take();
}

void decode_weights(Network& net, const std::vector<uint8_t>& bytes) {
    io::ByteReader r(bytes);
    if (r.bytes(4, "magic") != "HXNN") throw io::FormatError("bad weights magic", 0);
    const auto version_at = r.offset();
    if (r.le<uint16_t>("version") != kVersion) throw io::FormatError("unsupported weights version", version_at);
    const auto params = net.params();
    const auto count = r.le<uint32_t>("tensor count");
    if (count != params.size()) {
        throw ShapeError("weights file holds " + std::to_string(count) + " tensors, model '" + net.spec().name +
                         "' has " + std::to_string(params.size()));
    }
    std::vector<std::vector<double>> values(count);
    for (uint32_t t = 0; t < count; ++t) {
        const auto name = r.bytes(r.le<uint32_t>("name length"), "tensor name");
        const auto rank = r.le<uint32_t>("rank");
        std::vector<int64_t> dims(rank);
        for (auto& d : dims) d = static_cast<int64_t>(r.le<uint64_t>("dimension"));
        if (name != params[t].name || dims != params[t].dims) {
            throw ShapeError("weights tensor '" + name + "' " + dims_str(dims) + " does not match model tensor '" +
                             params[t].name + "' " + dims_str(params[t].dims));
        }
        values[t].resize(static_cast<std::size_t>(params[t].size));
        for (auto& v : values[t]) v = r.le<double>("tensor values");
    }
    if (r.remaining() != 0) throw io::FormatError("trailing bytes after weights", r.offset());
    for (uint32_t t = 0; t < count; ++t) std::copy(values[t].begin(), values[t].end(), params[t].value);
}

void save_weights(Network& net, const std::filesystem::path& path) { io::write_file(path, encode_weights(net)); }

void load_weights(Network& net, const std::filesystem::path& path) { decode_weights(net, io::read_file(path)); }

}  // namespace hexkit::nn
