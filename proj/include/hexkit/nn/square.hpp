#pragma once

#include <limits>

#include "hexkit/nn/patches.hpp"
#include "hexkit/nn/tensor.hpp"

namespace hexkit::nn {

/// k x k square convolution kernel, row = (kr * k + kc) * in + c_in.
template <typename Scalar>
struct SquareKernel {
    int64_t size = 3;
    int64_t in_channels = 0;
    int64_t out_channels = 0;
    RowMatrix<Scalar> weights;
    Vector<Scalar> bias;

    SquareKernel() = default;
    SquareKernel(int64_t k, int64_t in, int64_t out)
        : size(k), in_channels(in), out_channels(out),
          weights(RowMatrix<Scalar>::Zero(k * k * in, out)), bias(Vector<Scalar>::Zero(out)) {}

    Scalar& tap(int64_t kr, int64_t kc, int64_t cin, int64_t cout) {
        return weights((kr * size + kc) * in_channels + cin, cout);
    }
    Scalar tap(int64_t kr, int64_t kc, int64_t cin, int64_t cout) const {
        return weights((kr * size + kc) * in_channels + cin, cout);
    }
    int64_t parameter_count() const { return size * size * in_channels * out_channels + out_channels; }
};

inline PatchLayout sconv2d_layout(int64_t rows, int64_t cols, int64_t kernel, int64_t stride) {
    PatchLayout layout;
    layout.rows_out = ceil_div(rows, stride);
    layout.cols_out = ceil_div(cols, stride);
    layout.stride = stride;
    layout.row_offset = -same_padding(rows, kernel, stride, layout.rows_out).before;
    layout.col_offset = -same_padding(cols, kernel, stride, layout.cols_out).before;
    for (int64_t kr = 0; kr < kernel; ++kr) {
        for (int64_t kc = 0; kc < kernel; ++kc) layout.even_taps.push_back({kr, kc});
    }
    layout.odd_taps = layout.even_taps;
    return layout;
}

template <typename Scalar>
Tensor4<Scalar> sconv2d_forward(const Tensor4<Scalar>& x, const SquareKernel<Scalar>& k, int64_t stride) {
    if (x.channels() != k.in_channels) throw std::invalid_argument("sconv2d_forward: input channel mismatch");
    const PatchLayout layout = sconv2d_layout(x.rows(), x.cols(), k.size, stride);
    const RowMatrix<Scalar> patches = gather_patches(x, layout);
    Tensor4<Scalar> y(x.batch(), layout.rows_out, layout.cols_out, k.out_channels);
    Eigen::Map<RowMatrix<Scalar>> out(y.data().data(), patches.rows(), k.out_channels);
    out.noalias() = patches * k.weights;
    out.rowwise() += k.bias.transpose();
    return y;
}

template <typename Scalar>
struct SquareConvGradients {
    Tensor4<Scalar> input;
    RowMatrix<Scalar> weights;
    Vector<Scalar> bias;
};

template <typename Scalar>
SquareConvGradients<Scalar> sconv2d_backward(const Tensor4<Scalar>& x, const SquareKernel<Scalar>& k, int64_t stride,
                                             const Tensor4<Scalar>& grad_out) {
    if (x.channels() != k.in_channels) throw std::invalid_argument("sconv2d_backward: input channel mismatch");
    const PatchLayout layout = sconv2d_layout(x.rows(), x.cols(), k.size, stride);
    if (grad_out.shape() != Shape4{x.batch(), layout.rows_out, layout.cols_out, k.out_channels}) {
        throw std::invalid_argument("sconv2d_backward: grad_out shape mismatch");
    }
    const RowMatrix<Scalar> patches = gather_patches(x, layout);
    Eigen::Map<const RowMatrix<Scalar>> dy(grad_out.data().data(), patches.rows(), k.out_channels);
    SquareConvGradients<Scalar> g;
    g.weights.noalias() = patches.transpose() * dy;
    g.bias = dy.colwise().sum().transpose();
    const RowMatrix<Scalar> dpatches = dy * k.weights.transpose();
    g.input = scatter_patches(dpatches, x.shape(), layout);
    return g;
}

/// Result of a max-pooling pass: pooled values and, per output entry, the
/// flat input index that won (-1 when the window saw only padding).
template <typename Scalar>
struct PoolResult {
    Tensor4<Scalar> output;
    std::vector<int64_t> argmax;
};

// k x k max pooling with stride k and same padding; padding never wins.
template <typename Scalar>
PoolResult<Scalar> smaxpool_forward(const Tensor4<Scalar>& x, int64_t k) {
    if (k < 1) throw std::invalid_argument("smaxpool: pool size must be >= 1");
    const int64_t rows_out = ceil_div(x.rows(), k);
    const int64_t cols_out = ceil_div(x.cols(), k);
    const int64_t pr = same_padding(x.rows(), k, k, rows_out).before;
    const int64_t pc = same_padding(x.cols(), k, k, cols_out).before;
    PoolResult<Scalar> res{Tensor4<Scalar>(x.batch(), rows_out, cols_out, x.channels()), {}};
    res.argmax.assign(static_cast<std::size_t>(res.output.size()), -1);
    for (int64_t n = 0; n < x.batch(); ++n) {
        for (int64_t i = 0; i < rows_out; ++i) {
            for (int64_t j = 0; j < cols_out; ++j) {
                for (int64_t ch = 0; ch < x.channels(); ++ch) {
                    Scalar best = -std::numeric_limits<Scalar>::infinity();
                    int64_t arg = -1;
                    for (int64_t a = 0; a < k; ++a) {
                        const int64_t r = i * k - pr + a;
                        if (r < 0 || r >= x.rows()) continue;
                        for (int64_t b = 0; b < k; ++b) {
                            const int64_t c = j * k - pc + b;
                            if (c < 0 || c >= x.cols()) continue;
                            const int64_t idx = x.index(n, r, c, ch);
                            if (x.data()[idx] > best) {
                                best = x.data()[idx];
                                arg = idx;
                            }
                        }
                    }
                    const int64_t o = res.output.index(n, i, j, ch);
                    res.output.data()[o] = best;
                    res.argmax[static_cast<std::size_t>(o)] = arg;
                }
            }
        }
    }
    return res;
}

// Routes each pooled gradient to its winning input; overlapping windows
// accumulate.
template <typename Scalar>
Tensor4<Scalar> maxpool_backward(const Shape4& input, const std::vector<int64_t>& argmax,
                                 const Tensor4<Scalar>& grad_out) {
    if (static_cast<int64_t>(argmax.size()) != grad_out.size()) {
        throw std::invalid_argument("maxpool_backward: argmax does not match grad_out");
    }
    Tensor4<Scalar> dx(input);
    for (std::size_t o = 0; o < argmax.size(); ++o) {
        const int64_t idx = argmax[o];
        if (idx < 0) continue;
        if (idx >= dx.size()) throw std::invalid_argument("maxpool_backward: stale argmax");
        dx.data()[idx] += grad_out.data()[static_cast<int64_t>(o)];
    }
    return dx;
}

}  // namespace hexkit::nn
