#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace hexkit {

/// Square-lattice raster, row-major with channels innermost. Pixel (x, y)
/// covers [x, x + 1) x [y, y + 1).
template <typename Scalar>
class SquareImage {
public:
    using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    SquareImage() = default;
    SquareImage(int64_t width, int64_t height, int64_t channels = 1, Scalar fill = Scalar(0))
        : width_(width), height_(height), channels_(channels) {
        if (width < 0 || height < 0 || channels < 1) throw std::invalid_argument("SquareImage: bad dimensions");
        data_ = Storage::Constant(width * height * channels, fill);
    }

    int64_t width() const { return width_; }
    int64_t height() const { return height_; }
    int64_t channels() const { return channels_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    int64_t index(int64_t x, int64_t y, int64_t ch = 0) const { return (y * width_ + x) * channels_ + ch; }
    Scalar& operator()(int64_t x, int64_t y, int64_t ch = 0) { return data_[index(x, y, ch)]; }
    Scalar operator()(int64_t x, int64_t y, int64_t ch = 0) const { return data_[index(x, y, ch)]; }

    Storage& data() { return data_; }
    const Storage& data() const { return data_; }

    template <typename Other>
    SquareImage<Other> cast() const {
        SquareImage<Other> out(width_, height_, channels_);
        out.data() = data_.template cast<Other>();
        return out;
    }

private:
    int64_t width_ = 0;
    int64_t height_ = 0;
    int64_t channels_ = 1;
    Storage data_;
};

using Image = SquareImage<double>;

}  // namespace hexkit
