#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hexkit/io/errors.hpp"

namespace hexkit::io {

std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<uint8_t>& bytes);

/// Little/big-endian byte sink.
class ByteWriter {
public:
    void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
    template <typename T>
    void le(T v) {
        const auto u = std::bit_cast<std::make_unsigned_t<decltype(as_int(v))>>(as_int(v));
        for (std::size_t i = 0; i < sizeof(T); ++i) buf_.push_back(static_cast<uint8_t>(u >> (8 * i)));
    }
    template <typename T>
    void be(T v) {
        const auto u = std::bit_cast<std::make_unsigned_t<decltype(as_int(v))>>(as_int(v));
        for (std::size_t i = sizeof(T); i-- > 0;) buf_.push_back(static_cast<uint8_t>(u >> (8 * i)));
    }
    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    template <typename T>
    static auto as_int(T v) {
        if constexpr (std::is_same_v<T, double>) return std::bit_cast<int64_t>(v);
        else if constexpr (std::is_same_v<T, float>) return std::bit_cast<int32_t>(v);
        else return v;
    }
    std::vector<uint8_t> buf_;
};

/// Bounds-checked byte source; reading past the end raises FormatError.
class ByteReader {
public:
    explicit ByteReader(const std::vector<uint8_t>& buf) : buf_(buf) {}

    uint64_t offset() const { return pos_; }
    uint64_t remaining() const { return buf_.size() - pos_; }

    std::string bytes(std::size_t n, std::string_view what) {
        need(n, what);
        std::string s(reinterpret_cast<const char*>(buf_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    template <typename T>
    T le(std::string_view what) {
        need(sizeof(T), what);
        uint64_t u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<uint64_t>(buf_[pos_ + i]) << (8 * i);
        pos_ += sizeof(T);
        return from_bits<T>(u);
    }
    template <typename T>
    T be(std::string_view what) {
        need(sizeof(T), what);
        uint64_t u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) u = (u << 8) | buf_[pos_ + i];
        pos_ += sizeof(T);
        return from_bits<T>(u);
    }
    const uint8_t* current() const { return buf_.data() + pos_; }
    void skip(std::size_t n, std::string_view what) {
        need(n, what);
        pos_ += n;
    }

private:
    void need(std::size_t n, std::string_view what) const {
        if (buf_.size() - pos_ < n) throw FormatError("truncated input while reading " + std::string(what), pos_);
    }
    template <typename T>
    static T from_bits(uint64_t u) {
        if constexpr (std::is_same_v<T, double>) return std::bit_cast<double>(u);
        else if constexpr (std::is_same_v<T, float>) return std::bit_cast<float>(static_cast<uint32_t>(u));
        else return static_cast<T>(u);
    }
    const std::vector<uint8_t>& buf_;
    std::size_t pos_ = 0;
};

}  // namespace hexkit::io
