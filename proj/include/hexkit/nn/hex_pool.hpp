#pragma once

#include <array>
#include <limits>
#include <vector>

#include "hexkit/grid.hpp"
#include "hexkit/nn/square.hpp"
#include "hexkit/nn/tensor.hpp"

namespace hexkit::nn {

/// Matching between the ideal order-1 sub-Hexarray centers and the integer
/// 3x3 window offsets around a pooling center.
struct PoolingAssignment {
    int64_t parity = 0;
    std::array<Eigen::Vector2d, 7> ideal{};  // cartesian, pitch 1, spiral digit order
    std::vector<Cell> candidates;            // 3x3 window offsets, row-major
    std::vector<Eigen::Vector2d> candidate_positions;
    std::array<int, 7> chosen{};             // ideal i -> candidates[chosen[i]]
    double cost = 0.0;                       // sum of squared distances
};

// Squared-distance cost between ideal offsets (scaled by `scale`) and the
// window candidates; 7 x 9 before padding.
Eigen::MatrixXd pool_cost_matrix(int64_t parity, double scale = 1.0);
PoolingAssignment pool_assignment(int64_t parity, double scale = 1.0);

// Cached assignment result: 7 (drow, dcol) offsets in spiral digit order.
const std::array<Cell, 7>& pool_offsets(int64_t parity);

inline std::array<int64_t, 2> hmaxpool_output_size(int64_t rows, int64_t cols) {
    if (rows < 3 || cols < 3) throw std::invalid_argument("hmaxpool: input must be at least 3 x 3");
    return {ceil_div(rows - 2, 2), ceil_div(cols, 3)};
}

// Window centers spread evenly: center k of n over `extent` sits at
// floor((k + 1/2) * extent / n).
inline int64_t hmaxpool_center(int64_t k, int64_t extent, int64_t n) { return ((2 * k + 1) * extent) / (2 * n); }

template <typename Scalar>
PoolResult<Scalar> hmaxpool_forward(const Tensor4<Scalar>& x) {
    const auto [rows_out, cols_out] = hmaxpool_output_size(x.rows(), x.cols());
    PoolResult<Scalar> res{Tensor4<Scalar>(x.batch(), rows_out, cols_out, x.channels()), {}};
    res.argmax.assign(static_cast<std::size_t>(res.output.size()), -1);
    for (int64_t n = 0; n < x.batch(); ++n) {
        for (int64_t i = 0; i < rows_out; ++i) {
            const int64_t cr = hmaxpool_center(i, x.rows(), rows_out);
            const auto& offsets = pool_offsets(cr & 1);
            for (int64_t j = 0; j < cols_out; ++j) {
                const int64_t cc = hmaxpool_center(j, x.cols(), cols_out);
                for (int64_t ch = 0; ch < x.channels(); ++ch) {
                    Scalar best = -std::numeric_limits<Scalar>::infinity();
                    int64_t arg = -1;
                    for (const auto& o : offsets) {
                        const int64_t r = cr + o.row;
                        const int64_t c = cc + o.col;
                        const bool inside = r >= 0 && r < x.rows() && c >= 0 && c < x.cols();
                        const int64_t idx = inside ? x.index(n, r, c, ch) : -1;
                        const Scalar v = inside ? x.data()[idx] : Scalar(0);
                        if (v > best) {
                            best = v;
                            arg = idx;
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

template <typename Scalar>
Tensor4<Scalar> hmaxpool_backward(const Shape4& input, const std::vector<int64_t>& argmax,
                                  const Tensor4<Scalar>& grad_out) {
    const auto [rows_out, cols_out] = hmaxpool_output_size(input.rows, input.cols);
    if (grad_out.shape() != Shape4{input.batch, rows_out, cols_out, input.channels}) {
        throw std::invalid_argument("hmaxpool_backward: grad_out shape mismatch");
    }
    return maxpool_backward(input, argmax, grad_out);
}

}  // namespace hexkit::nn
