#include "hexkit/io/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include <png.h>

#include "hexkit/io/binary.hpp"

namespace hexkit::io {

namespace {

std::string lower_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

uint8_t to_byte(double v) { return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

Image read_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw FormatError("cannot decode PNG '" + path.string() + "': " + msg, 0);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int64_t channels = color ? 3 : 1;
    std::vector<uint8_t> buf(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw FormatError("cannot decode PNG '" + path.string() + "': " + msg, 0);
    }
    Image out(image.width, image.height, channels);
    for (std::size_t i = 0; i < buf.size(); ++i) out.data()[static_cast<Eigen::Index>(i)] = buf[i];
    return out;
}

void write_png(const std::filesystem::path& path, const Image& img) {
    if (img.channels() != 1 && img.channels() != 3) throw std::invalid_argument("write_png: need 1 or 3 channels");
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<uint8_t> buf(static_cast<std::size_t>(img.data().size()));
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = to_byte(img.data()[static_cast<Eigen::Index>(i)]);
    if (!png_image_write_to_file(&image, path.c_str(), 0, buf.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw IoError("cannot write PNG '" + path.string() + "': " + msg);
    }
}

// Next whitespace-separated header token, skipping '#' comments.
int64_t pnm_token(const std::vector<uint8_t>& b, std::size_t& pos) {
    while (pos < b.size()) {
        if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else if (std::isspace(b[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    int64_t v = 0;
    while (pos < b.size() && std::isdigit(b[pos])) v = v * 10 + (b[pos++] - '0');
    if (pos == start) throw FormatError("malformed PNM header", start);
    return v;
}

}  // namespace

Image decode_pnm(const std::vector<uint8_t>& b) {
    if (b.size() < 2 || b[0] != 'P' || (b[1] != '5' && b[1] != '6')) throw FormatError("not a binary PGM/PPM", 0);
    const int64_t channels = b[1] == '5' ? 1 : 3;
    std::size_t pos = 2;
    const int64_t width = pnm_token(b, pos);
    const int64_t height = pnm_token(b, pos);
    const std::size_t maxval_at = pos;
    const int64_t maxval = pnm_token(b, pos);
    if (maxval != 255) throw FormatError("only 8-bit PNM (maxval 255) is supported", maxval_at);
    if (width < 1 || height < 1) throw FormatError("PNM dimensions must be positive", 2);
    ++pos;  // single whitespace before the raster
    const auto need = static_cast<std::size_t>(width * height * channels);
    if (b.size() < pos + need) throw FormatError("PNM raster truncated", b.size());
    Image out(width, height, channels);
    for (std::size_t i = 0; i < need; ++i) out.data()[static_cast<Eigen::Index>(i)] = b[pos + i];
    return out;
}

std::vector<uint8_t> encode_pnm(const Image& img) {
    if (img.channels() != 1 && img.channels() != 3) throw std::invalid_argument("encode_pnm: need 1 or 3 channels");
    const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") + "\n" + std::to_string(img.width()) +
                               " " + std::to_string(img.height()) + "\n255\n";
    std::vector<uint8_t> out(header.begin(), header.end());
    for (Eigen::Index i = 0; i < img.data().size(); ++i) out.push_back(to_byte(img.data()[i]));
    return out;
}

Image read_image(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") {
        if (!std::filesystem::exists(path)) throw IoError("cannot open '" + path.string() + "' for reading");
        return read_png(path);
    }
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return decode_pnm(read_file(path));
    throw FormatError("unsupported image extension '" + ext + "' for '" + path.string() + "'", 0);
}

void write_image(const std::filesystem::path& path, const Image& img) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") return write_png(path, img);
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return write_file(path, encode_pnm(img));
    throw std::invalid_argument("unsupported output extension '" + ext + "'");
}

}  // namespace hexkit::io
