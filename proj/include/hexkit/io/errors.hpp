#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hexkit::io {

// The file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The bytes do not follow the expected format; `offset` points at the first
// offending byte.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, uint64_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    uint64_t offset() const { return offset_; }

private:
    uint64_t offset_;
};

}  // namespace hexkit::io
