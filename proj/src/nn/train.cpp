#include "hexkit/nn/train.hpp"

#include <numeric>
#include <stdexcept>

#include "hexkit/nn/dense.hpp"

namespace hexkit::nn {

Samples slice(const Samples& s, const std::vector<int64_t>& indices) {
    const Shape4& in = s.inputs.shape();
    Samples out;
    out.inputs = Tensor(static_cast<int64_t>(indices.size()), in.rows, in.cols, in.channels);
    const int64_t stride = in.sample_size();
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int64_t src = indices[i];
        out.inputs.data().segment(static_cast<int64_t>(i) * stride, stride) = s.inputs.data().segment(src * stride, stride);
        out.labels.push_back(s.labels[static_cast<std::size_t>(src)]);
    }
    return out;
}

namespace {

int64_t correct(const Matrix& logits, std::span<const int> labels) {
    int64_t hits = 0;
    for (int64_t i = 0; i < logits.rows(); ++i) {
        Eigen::Index arg = 0;
        logits.row(i).maxCoeff(&arg);
        if (arg == labels[static_cast<std::size_t>(i)]) ++hits;
    }
    return hits;
}

}  // namespace

Evaluation evaluate(Network& net, const Samples& data, int64_t batch_size) {
    if (data.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
    std::mt19937_64 unused(0);
    double loss = 0.0;
    int64_t hits = 0;
    for (int64_t begin = 0; begin < data.size(); begin += batch_size) {
        const int64_t end = std::min(data.size(), begin + batch_size);
        std::vector<int64_t> idx(static_cast<std::size_t>(end - begin));
        std::iota(idx.begin(), idx.end(), begin);
        const Samples batch = slice(data, idx);
        const Tensor logits = net.forward(batch.inputs, false, unused);
        const Matrix m = logits.as_matrix();
        const auto sx = softmax_xent<double>(m, batch.labels);
        loss += sx.loss * static_cast<double>(end - begin);
        hits += correct(m, batch.labels);
    }
    const auto n = static_cast<double>(data.size());
    return {loss / n, static_cast<double>(hits) / n};
}

TrainResult train(Network& net, const Samples& train_set, const Samples* test_set, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
    if (train_set.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (cfg.batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
    if (cfg.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");

    net.initialize(cfg.seed);
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    TrainResult result;
    result.initial_loss = evaluate(net, train_set).loss;

    AdamState adam;
    std::vector<int64_t> order(static_cast<std::size_t>(train_set.size()));
    std::iota(order.begin(), order.end(), 0);
    for (int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with explicit draws so the order does not depend on
        // the standard library's shuffle.
        for (std::size_t i = order.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng() % i);
            std::swap(order[i - 1], order[j]);
        }
        double loss_sum = 0.0;
        int64_t hits = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
            const std::vector<int64_t> idx(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                           order.begin() + static_cast<std::ptrdiff_t>(end));
            const Samples batch = slice(train_set, idx);
            const Tensor logits = net.forward(batch.inputs, true, rng);
            const Matrix m = logits.as_matrix();
            const auto sx = softmax_xent<double>(m, batch.labels);
            loss_sum += sx.loss * static_cast<double>(idx.size());
            hits += correct(m, batch.labels);
            Tensor grad(logits.shape());
            grad.as_matrix() = sx.grad;
            net.backward(grad);
            const auto params = net.params();
            adam_step(params, adam, cfg.adam);
        }
        const auto n = static_cast<double>(train_set.size());
        EpochStats stats{loss_sum / n, static_cast<double>(hits) / n};
        result.history.push_back(stats);
        result.eval_loss.push_back(evaluate(net, train_set).loss);
        if (on_epoch) on_epoch(epoch, stats);
    }
    if (test_set != nullptr && test_set->size() > 0) {
        const Evaluation ev = evaluate(net, *test_set);
        result.test_accuracy = ev.accuracy;
        result.test_loss = ev.loss;
    }
    return result;
}

}  // namespace hexkit::nn
