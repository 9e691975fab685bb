#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hexkit::nn {

struct Shape4 {
    int64_t batch = 0, rows = 0, cols = 0, channels = 0;

    int64_t size() const { return batch * rows * cols * channels; }
    int64_t sample_size() const { return rows * cols * channels; }
    bool operator==(const Shape4&) const = default;
};

std::string to_string(const Shape4& s);

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Batch x rows x cols x channels activations, row-major.
template <typename Scalar>
class Tensor4 {
public:
    using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    Tensor4() = default;
    explicit Tensor4(const Shape4& shape, Scalar fill = Scalar(0)) : shape_(shape) {
        if (shape.batch < 0 || shape.rows < 0 || shape.cols < 0 || shape.channels < 0) {
            throw std::invalid_argument("Tensor4: negative dimension");
        }
        data_ = Storage::Constant(shape.size(), fill);
    }
    Tensor4(int64_t batch, int64_t rows, int64_t cols, int64_t channels, Scalar fill = Scalar(0))
        : Tensor4(Shape4{batch, rows, cols, channels}, fill) {}

    const Shape4& shape() const { return shape_; }
    int64_t batch() const { return shape_.batch; }
    int64_t rows() const { return shape_.rows; }
    int64_t cols() const { return shape_.cols; }
    int64_t channels() const { return shape_.channels; }
    int64_t size() const { return shape_.size(); }

    int64_t index(int64_t n, int64_t r, int64_t c, int64_t ch) const {
        return ((n * shape_.rows + r) * shape_.cols + c) * shape_.channels + ch;
    }
    Scalar& operator()(int64_t n, int64_t r, int64_t c, int64_t ch) { return data_[index(n, r, c, ch)]; }
    Scalar operator()(int64_t n, int64_t r, int64_t c, int64_t ch) const { return data_[index(n, r, c, ch)]; }

    Storage& data() { return data_; }
    const Storage& data() const { return data_; }

    // Same storage viewed with a different shape of equal size.
    Tensor4 reshaped(const Shape4& shape) const {
        if (shape.size() != shape_.size()) throw std::invalid_argument("Tensor4::reshaped: size mismatch");
        Tensor4 out;
        out.shape_ = shape;
        out.data_ = data_;
        return out;
    }

    // (batch, features) matrix view.
    Eigen::Map<const RowMatrix<Scalar>> as_matrix() const {
        return {data_.data(), shape_.batch, shape_.sample_size()};
    }
    Eigen::Map<RowMatrix<Scalar>> as_matrix() { return {data_.data(), shape_.batch, shape_.sample_size()}; }

private:
    Shape4 shape_;
    Storage data_;
};

}  // namespace hexkit::nn
