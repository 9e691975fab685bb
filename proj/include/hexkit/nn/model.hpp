#pragma once

#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hexkit/nn/tensor.hpp"

namespace hexkit::nn {

enum class LayerKind { HexConv, SquareConv, HexMaxPool, SquareMaxPool, Dropout, Flatten, Dense };

std::string_view to_string(LayerKind kind);

struct LayerSpec {
    std::string name;
    LayerKind kind = LayerKind::Dense;
    int64_t units = 0;    // filters for convolutions, width for dense
    int64_t kernel = 3;   // square conv / pool window
    int64_t stride = 1;
    double rate = 0.0;    // dropout
    bool relu = false;
};

/// Activation shape between layers: (rows, cols, channels) before flatten,
/// (features) after.
struct LayerShape {
    std::vector<int64_t> dims;
    int64_t size() const;
    std::string str() const;
    bool operator==(const LayerShape&) const = default;
};

struct ModelSpec {
    std::string name;
    int64_t input_rows = 0;
    int64_t input_cols = 0;
    int64_t input_channels = 0;
    std::vector<LayerSpec> layers;
};

class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LayerInfo {
    const LayerSpec* spec = nullptr;
    LayerShape output;
    int64_t params = 0;
};

struct ModelInfo {
    std::vector<LayerInfo> layers;
    int64_t total_params = 0;
};

// Propagates shapes and counts trainable parameters; throws ShapeError
// naming the first layer whose input does not fit.
ModelInfo analyze(const ModelSpec& spec);
int64_t count_params(const ModelSpec& spec);

// Presets "h-cnn", "s-cnn" and "s-cnn-3x3"; defaults reproduce the 3-channel,
// 100-class configurations.
ModelSpec preset(std::string_view name, int64_t channels = 3, int64_t classes = 100);

// Integer with a space between digit groups, e.g. 565 956.
std::string group_digits(int64_t v);

// Fixed-width layer table ending in the trainable parameter total.
std::string summary_table(const ModelSpec& spec);

using Tensor = Tensor4<double>;
using Matrix = RowMatrix<double>;

/// Flat view of one trainable tensor and its gradient buffer.
struct ParamView {
    std::string name;
    std::vector<int64_t> dims;
    double* value = nullptr;
    double* grad = nullptr;
    int64_t size = 0;
};

class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x, bool training, std::mt19937_64& rng) = 0;
    // Returns the input gradient and overwrites parameter gradients.
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual std::vector<ParamView> params() { return {}; }
    virtual void initialize(std::mt19937_64&) {}
};

/// Executable network built from a ModelSpec, double precision.
class Network {
public:
    explicit Network(ModelSpec spec);
    Network(Network&&) noexcept;
    Network& operator=(Network&&) noexcept;
    ~Network();

    const ModelSpec& spec() const { return spec_; }
    void initialize(uint64_t seed);

    // Logits as a (batch, classes) tensor with rows = cols = 1.
    Tensor forward(const Tensor& x, bool training, std::mt19937_64& rng);
    void backward(const Tensor& grad_logits);
    std::vector<ParamView> params();
    int64_t parameter_count();

private:
    ModelSpec spec_;
    std::vector<std::unique_ptr<Layer>> layers_;
};

// Glorot-uniform draws in +-sqrt(6 / (fan_in + fan_out)).
Eigen::VectorXd glorot_uniform(int64_t fan_in, int64_t fan_out, int64_t count, std::mt19937_64& rng);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<Eigen::VectorXd> m;
    std::vector<Eigen::VectorXd> v;
    int64_t step = 0;
};

// One bias-corrected Adam update over every parameter view.
void adam_step(std::span<const ParamView> params, AdamState& state, const AdamConfig& cfg);

}  // namespace hexkit::nn
