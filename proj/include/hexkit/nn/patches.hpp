#pragma once

#include <span>
#include <vector>

#include "hexkit/grid.hpp"
#include "hexkit/nn/tensor.hpp"

namespace hexkit::nn {

/// Placement of convolution windows: output cell (i, j) anchors at input
/// (stride * i + row_offset, stride * j + col_offset); taps are offsets from
/// the anchor and may depend on output row parity.
struct PatchLayout {
    int64_t rows_out = 0;
    int64_t cols_out = 0;
    int64_t stride = 1;
    int64_t row_offset = 0;
    int64_t col_offset = 0;
    std::vector<Cell> even_taps;
    std::vector<Cell> odd_taps;

    const std::vector<Cell>& taps(int64_t out_row) const { return (out_row & 1) ? odd_taps : even_taps; }
    int64_t tap_count() const { return static_cast<int64_t>(even_taps.size()); }
};

// im2col: one row per output cell, tap-major then channel. Out-of-range taps
// read zero.
template <typename Scalar>
RowMatrix<Scalar> gather_patches(const Tensor4<Scalar>& x, const PatchLayout& layout) {
    const int64_t cin = x.channels();
    const int64_t taps = layout.tap_count();
    RowMatrix<Scalar> patches = RowMatrix<Scalar>::Zero(x.batch() * layout.rows_out * layout.cols_out, taps * cin);
    int64_t row = 0;
    for (int64_t n = 0; n < x.batch(); ++n) {
        for (int64_t i = 0; i < layout.rows_out; ++i) {
            const auto& offsets = layout.taps(i);
            const int64_t ar = layout.stride * i + layout.row_offset;
            for (int64_t j = 0; j < layout.cols_out; ++j, ++row) {
                const int64_t ac = layout.stride * j + layout.col_offset;
                Scalar* dst = patches.row(row).data();
                for (int64_t t = 0; t < taps; ++t) {
                    const int64_t r = ar + offsets[static_cast<std::size_t>(t)].row;
                    const int64_t c = ac + offsets[static_cast<std::size_t>(t)].col;
                    if (r < 0 || r >= x.rows() || c < 0 || c >= x.cols()) continue;
                    const Scalar* src = x.data().data() + x.index(n, r, c, 0);
                    std::copy(src, src + cin, dst + t * cin);
                }
            }
        }
    }
    return patches;
}

// Adjoint of gather_patches: accumulates patch gradients into the input.
template <typename Scalar>
Tensor4<Scalar> scatter_patches(const RowMatrix<Scalar>& patches, const Shape4& input, const PatchLayout& layout) {
    Tensor4<Scalar> dx(input);
    const int64_t cin = input.channels;
    const int64_t taps = layout.tap_count();
    int64_t row = 0;
    for (int64_t n = 0; n < input.batch; ++n) {
        for (int64_t i = 0; i < layout.rows_out; ++i) {
            const auto& offsets = layout.taps(i);
            const int64_t ar = layout.stride * i + layout.row_offset;
            for (int64_t j = 0; j < layout.cols_out; ++j, ++row) {
                const int64_t ac = layout.stride * j + layout.col_offset;
                const Scalar* src = patches.row(row).data();
                for (int64_t t = 0; t < taps; ++t) {
                    const int64_t r = ar + offsets[static_cast<std::size_t>(t)].row;
                    const int64_t c = ac + offsets[static_cast<std::size_t>(t)].col;
                    if (r < 0 || r >= input.rows || c < 0 || c >= input.cols) continue;
                    Scalar* dst = dx.data().data() + dx.index(n, r, c, 0);
                    for (int64_t k = 0; k < cin; ++k) dst[k] += src[t * cin + k];
                }
            }
        }
    }
    return dx;
}

// Keras-style "same" padding: output size and leading pad along one axis.
struct SamePadding {
    int64_t out = 0;
    int64_t before = 0;
};

inline SamePadding same_padding(int64_t in, int64_t kernel, int64_t stride, int64_t out) {
    const int64_t total = std::max<int64_t>((out - 1) * stride + kernel - in, 0);
    return {out, total / 2};
}

inline int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

}  // namespace hexkit::nn
