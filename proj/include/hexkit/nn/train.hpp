#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hexkit/nn/model.hpp"

namespace hexkit::nn {

/// Network inputs with one class label per sample.
struct Samples {
    Tensor inputs;
    std::vector<int> labels;

    int64_t size() const { return static_cast<int64_t>(labels.size()); }
};

struct TrainConfig {
    int64_t batch_size = 32;
    int64_t epochs = 1;
    uint64_t seed = 0;
    AdamConfig adam;
};

struct EpochStats {
    double loss = 0.0;      // mean training loss over the epoch's batches
    double accuracy = 0.0;  // training accuracy over the epoch's batches
};

struct Evaluation {
    double loss = 0.0;
    double accuracy = 0.0;
};

struct TrainResult {
    double initial_loss = 0.0;  // inference-mode loss on the training set before any update
    std::vector<EpochStats> history;
    std::vector<double> eval_loss;  // inference-mode training loss after each epoch
    double test_accuracy = 0.0;
    double test_loss = 0.0;
};

Samples slice(const Samples& s, const std::vector<int64_t>& indices);

Evaluation evaluate(Network& net, const Samples& data, int64_t batch_size = 256);

using EpochCallback = std::function<void(int64_t epoch, const EpochStats&)>;

// Mini-batch Adam training with softmax cross-entropy. The seed drives
// initialization, shuffling and dropout, so single-threaded runs repeat
// bitwise.
TrainResult train(Network& net, const Samples& train_set, const Samples* test_set, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

}  // namespace hexkit::nn
