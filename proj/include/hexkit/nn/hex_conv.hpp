#pragma once

#include <array>

#include "hexkit/grid.hpp"
#include "hexkit/nn/patches.hpp"
#include "hexkit/nn/tensor.hpp"

namespace hexkit::nn {

inline constexpr int64_t kHexTaps = 7;

// Order-1 hex neighborhood: center, then neighbors counterclockwise from east.
inline std::array<Cell, kHexTaps> hex_tap_offsets(int64_t row_parity) {
    std::array<Cell, kHexTaps> out{};
    out[0] = {0, 0};
    const auto ring = neighbor_offsets(row_parity);
    std::copy(ring.begin(), ring.end(), out.begin() + 1);
    return out;
}

// 3x3 footprint of the hex kernel for one row parity, row-major over
// (dr, dc) in {-1, 0, 1}^2.
inline std::array<bool, 9> hex_mask(int64_t row_parity) {
    std::array<bool, 9> mask{};
    for (const auto& t : hex_tap_offsets(row_parity)) mask[static_cast<std::size_t>((t.row + 1) * 3 + t.col + 1)] = true;
    return mask;
}

/// Hexagonal 7-tap kernel. One set of tap weights serves both row parities;
/// the parity decides where each tap lands in the 3x3 window.
template <typename Scalar>
struct HexKernelPair {
    int64_t in_channels = 0;
    int64_t out_channels = 0;
    RowMatrix<Scalar> weights;  // (7 * in, out), row = tap * in + c_in
    Vector<Scalar> bias;

    HexKernelPair() = default;
    HexKernelPair(int64_t in, int64_t out)
        : in_channels(in), out_channels(out),
          weights(RowMatrix<Scalar>::Zero(kHexTaps * in, out)), bias(Vector<Scalar>::Zero(out)) {}

    Scalar& tap(int64_t t, int64_t cin, int64_t cout) { return weights(t * in_channels + cin, cout); }
    Scalar tap(int64_t t, int64_t cin, int64_t cout) const { return weights(t * in_channels + cin, cout); }

    // Dense 3x3 x in x out view for one parity; masked-off taps are zero.
    RowMatrix<Scalar> dense_weights(int64_t row_parity) const {
        RowMatrix<Scalar> out = RowMatrix<Scalar>::Zero(9 * in_channels, out_channels);
        const auto offsets = hex_tap_offsets(row_parity);
        for (int64_t t = 0; t < kHexTaps; ++t) {
            const auto& o = offsets[static_cast<std::size_t>(t)];
            const int64_t slot = (o.row + 1) * 3 + o.col + 1;
            out.middleRows(slot * in_channels, in_channels) = weights.middleRows(t * in_channels, in_channels);
        }
        return out;
    }
    RowMatrix<Scalar> even_weights() const { return dense_weights(0); }
    RowMatrix<Scalar> odd_weights() const { return dense_weights(1); }

    int64_t parameter_count() const { return kHexTaps * in_channels * out_channels + out_channels; }
};

// Stride 1 keeps (rows, cols); stride 2 gives (rows / 2 + 1, cols / 2).
inline std::array<int64_t, 2> hconv2d_output_size(int64_t rows, int64_t cols, int64_t stride) {
    if (stride == 1) return {rows, cols};
    if (stride == 2) return {rows / 2 + 1, cols / 2};
    throw std::invalid_argument("hconv2d: stride must be 1 or 2");
}

// Window centers follow same-style padding; the kernel parity follows the
// output row.
inline PatchLayout hconv2d_layout(int64_t rows, int64_t cols, int64_t stride) {
    const auto [rows_out, cols_out] = hconv2d_output_size(rows, cols, stride);
    PatchLayout layout;
    layout.rows_out = rows_out;
    layout.cols_out = cols_out;
    layout.stride = stride;
    layout.row_offset = 1 - same_padding(rows, 3, stride, rows_out).before;
    layout.col_offset = 1 - same_padding(cols, 3, stride, cols_out).before;
    const auto even = hex_tap_offsets(0);
    const auto odd = hex_tap_offsets(1);
    layout.even_taps.assign(even.begin(), even.end());
    layout.odd_taps.assign(odd.begin(), odd.end());
    return layout;
}

template <typename Scalar>
Tensor4<Scalar> hconv2d_forward(const Tensor4<Scalar>& x, const HexKernelPair<Scalar>& k, int64_t stride) {
    if (x.channels() != k.in_channels) throw std::invalid_argument("hconv2d_forward: input channel mismatch");
    const PatchLayout layout = hconv2d_layout(x.rows(), x.cols(), stride);
    const RowMatrix<Scalar> patches = gather_patches(x, layout);
    Tensor4<Scalar> y(x.batch(), layout.rows_out, layout.cols_out, k.out_channels);
    Eigen::Map<RowMatrix<Scalar>> out(y.data().data(), patches.rows(), k.out_channels);
    out.noalias() = patches * k.weights;
    out.rowwise() += k.bias.transpose();
    return y;
}

template <typename Scalar>
struct HexConvGradients {
    Tensor4<Scalar> input;
    RowMatrix<Scalar> weights;
    Vector<Scalar> bias;
};

template <typename Scalar>
HexConvGradients<Scalar> hconv2d_backward(const Tensor4<Scalar>& x, const HexKernelPair<Scalar>& k, int64_t stride,
                                          const Tensor4<Scalar>& grad_out) {
    if (x.channels() != k.in_channels) throw std::invalid_argument("hconv2d_backward: input channel mismatch");
    const PatchLayout layout = hconv2d_layout(x.rows(), x.cols(), stride);
    const Shape4 expected{x.batch(), layout.rows_out, layout.cols_out, k.out_channels};
    if (grad_out.shape() != expected) throw std::invalid_argument("hconv2d_backward: grad_out shape mismatch");
    const RowMatrix<Scalar> patches = gather_patches(x, layout);
    Eigen::Map<const RowMatrix<Scalar>> dy(grad_out.data().data(), patches.rows(), k.out_channels);
    HexConvGradients<Scalar> g;
    g.weights.noalias() = patches.transpose() * dy;
    g.bias = dy.colwise().sum().transpose();
    const RowMatrix<Scalar> dpatches = dy * k.weights.transpose();
    g.input = scatter_patches(dpatches, x.shape(), layout);
    return g;
}

}  // namespace hexkit::nn
