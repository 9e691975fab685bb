#pragma once

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "hexkit/nn/tensor.hpp"

namespace hexkit::nn {

template <typename Scalar>
struct DenseGradients {
    RowMatrix<Scalar> input;
    RowMatrix<Scalar> weights;
    Vector<Scalar> bias;
};

// y = x W + b over a (batch, in) input.
template <typename Scalar, typename Derived>
RowMatrix<Scalar> dense_forward(const Eigen::MatrixBase<Derived>& x, const RowMatrix<Scalar>& w,
                                const Vector<Scalar>& b) {
    if (x.cols() != w.rows()) throw std::invalid_argument("dense_forward: input width mismatch");
    RowMatrix<Scalar> y = x * w;
    y.rowwise() += b.transpose();
    return y;
}

template <typename Scalar, typename DerivedX, typename DerivedG>
DenseGradients<Scalar> dense_backward(const Eigen::MatrixBase<DerivedX>& x, const RowMatrix<Scalar>& w,
                                      const Eigen::MatrixBase<DerivedG>& grad_out) {
    if (grad_out.rows() != x.rows() || grad_out.cols() != w.cols()) {
        throw std::invalid_argument("dense_backward: grad_out shape mismatch");
    }
    DenseGradients<Scalar> g;
    g.weights.noalias() = x.transpose() * grad_out;
    g.bias = grad_out.colwise().sum().transpose();
    g.input.noalias() = grad_out * w.transpose();
    return g;
}

template <typename Scalar>
void relu_inplace(Eigen::Array<Scalar, Eigen::Dynamic, 1>& a) {
    a = a.max(Scalar(0));
}

// Gradient through ReLU given the activation output.
template <typename Scalar>
void relu_backward_inplace(Eigen::Array<Scalar, Eigen::Dynamic, 1>& grad,
                           const Eigen::Array<Scalar, Eigen::Dynamic, 1>& activated) {
    grad = (activated > Scalar(0)).select(grad, Scalar(0));
}

// Inverted dropout mask: entries are 0 or 1 / (1 - rate).
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> dropout_mask(int64_t size, double rate, std::mt19937_64& rng) {
    if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout: rate must be in [0, 1)");
    Eigen::Array<Scalar, Eigen::Dynamic, 1> mask(size);
    if (rate == 0.0) {
        mask.setOnes();
        return mask;
    }
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto keep = static_cast<Scalar>(1.0 / (1.0 - rate));
    for (int64_t i = 0; i < size; ++i) mask[i] = uni(rng) >= rate ? keep : Scalar(0);
    return mask;
}

template <typename Scalar>
struct SoftmaxXent {
    Scalar loss = 0;                 // mean over the batch
    RowMatrix<Scalar> probabilities;
    RowMatrix<Scalar> grad;          // d loss / d logits
};

template <typename Scalar>
SoftmaxXent<Scalar> softmax_xent(const RowMatrix<Scalar>& logits, std::span<const int> labels) {
    if (static_cast<int64_t>(labels.size()) != logits.rows()) {
        throw std::invalid_argument("softmax_xent: label count mismatch");
    }
    SoftmaxXent<Scalar> out;
    out.probabilities.resize(logits.rows(), logits.cols());
    out.grad.resize(logits.rows(), logits.cols());
    const Scalar inv_batch = Scalar(1) / static_cast<Scalar>(std::max<int64_t>(1, logits.rows()));
    Scalar total = 0;
    for (int64_t i = 0; i < logits.rows(); ++i) {
        const int label = labels[static_cast<std::size_t>(i)];
        if (label < 0 || label >= logits.cols()) throw std::invalid_argument("softmax_xent: label out of range");
        const Scalar m = logits.row(i).maxCoeff();
        const auto shifted = (logits.row(i).array() - m).eval();
        const Scalar log_z = std::log(shifted.exp().sum());
        out.probabilities.row(i) = (shifted - log_z).exp().matrix();
        total += log_z - shifted(label);
        out.grad.row(i) = out.probabilities.row(i) * inv_batch;
        out.grad(i, label) -= inv_batch;
    }
    out.loss = total * inv_batch;
    return out;
}

}  // namespace hexkit::nn
