#include "hexkit/nn/model.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "hexkit/nn/dense.hpp"
#include "hexkit/nn/hex_conv.hpp"
#include "hexkit/nn/hex_pool.hpp"
#include "hexkit/nn/square.hpp"

namespace hexkit::nn {

std::string to_string(const Shape4& s) {
    std::ostringstream os;
    os << "(" << s.batch << ", " << s.rows << ", " << s.cols << ", " << s.channels << ")";
    return os.str();
}

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::HexConv: return "HConv2D";
        case LayerKind::SquareConv: return "SConv2D";
        case LayerKind::HexMaxPool: return "HMaxPool2D";
        case LayerKind::SquareMaxPool: return "SMaxPool2D";
        case LayerKind::Dropout: return "Dropout";
        case LayerKind::Flatten: return "Flatten";
        case LayerKind::Dense: return "Dense";
    }
    return "?";
}

int64_t LayerShape::size() const {
    int64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

std::string LayerShape::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? ", " : "") << dims[i];
    os << ")";
    return os.str();
}

namespace {

[[noreturn]] void shape_fail(const LayerSpec& l, const LayerShape& in, const std::string& why) {
    throw ShapeError("layer '" + l.name + "' (" + std::string(to_string(l.kind)) + ") cannot take input " +
                     in.str() + ": " + why);
}

LayerShape propagate(const LayerSpec& l, const LayerShape& in, int64_t* params) {
    *params = 0;
    const bool spatial = in.dims.size() == 3;
    switch (l.kind) {
        case LayerKind::HexConv: {
            if (!spatial) shape_fail(l, in, "expects (rows, cols, channels)");
            if (l.units < 1) shape_fail(l, in, "filter count must be >= 1");
            if (l.stride != 1 && l.stride != 2) shape_fail(l, in, "stride must be 1 or 2");
            const auto [r, c] = hconv2d_output_size(in.dims[0], in.dims[1], l.stride);
            *params = kHexTaps * in.dims[2] * l.units + l.units;
            return {{r, c, l.units}};
        }
        case LayerKind::SquareConv: {
            if (!spatial) shape_fail(l, in, "expects (rows, cols, channels)");
            if (l.units < 1 || l.kernel < 1 || l.stride < 1) shape_fail(l, in, "bad filter, kernel or stride");
            *params = l.kernel * l.kernel * in.dims[2] * l.units + l.units;
            return {{ceil_div(in.dims[0], l.stride), ceil_div(in.dims[1], l.stride), l.units}};
        }
        case LayerKind::HexMaxPool: {
            if (!spatial) shape_fail(l, in, "expects (rows, cols, channels)");
            if (in.dims[0] < 3 || in.dims[1] < 3) shape_fail(l, in, "needs at least 3 x 3 input");
            const auto [r, c] = hmaxpool_output_size(in.dims[0], in.dims[1]);
            return {{r, c, in.dims[2]}};
        }
        case LayerKind::SquareMaxPool: {
            if (!spatial) shape_fail(l, in, "expects (rows, cols, channels)");
            if (l.kernel < 1) shape_fail(l, in, "pool size must be >= 1");
            return {{ceil_div(in.dims[0], l.kernel), ceil_div(in.dims[1], l.kernel), in.dims[2]}};
        }
        case LayerKind::Dropout:
            if (l.rate < 0.0 || l.rate >= 1.0) shape_fail(l, in, "rate must be in [0, 1)");
            return in;
        case LayerKind::Flatten:
            return {{in.size()}};
        case LayerKind::Dense: {
            if (in.dims.size() != 1) shape_fail(l, in, "expects a flat input");
            if (l.units < 1) shape_fail(l, in, "unit count must be >= 1");
            *params = in.dims[0] * l.units + l.units;
            return {{l.units}};
        }
    }
    shape_fail(l, in, "unknown layer kind");
}

}  // namespace

ModelInfo analyze(const ModelSpec& spec) {
    ModelInfo info;
    LayerShape shape{{spec.input_rows, spec.input_cols, spec.input_channels}};
    if (!spec.layers.empty() && (spec.input_rows < 1 || spec.input_cols < 1 || spec.input_channels < 1)) {
        throw ShapeError("model '" + spec.name + "': input shape must be positive");
    }
    for (const auto& l : spec.layers) {
        LayerInfo li;
        li.spec = &l;
        li.output = propagate(l, shape, &li.params);
        info.total_params += li.params;
        shape = li.output;
        info.layers.push_back(std::move(li));
    }
    return info;
}

int64_t count_params(const ModelSpec& spec) { return analyze(spec).total_params; }

ModelSpec preset(std::string_view name, int64_t channels, int64_t classes) {
    ModelSpec m;
    m.name = std::string(name);
    m.input_channels = channels;
    auto conv = [](std::string n, LayerKind kind, int64_t filters, int64_t stride) {
        LayerSpec l;
        l.name = std::move(n);
        l.kind = kind;
        l.units = filters;
        l.kernel = 3;
        l.stride = stride;
        l.relu = true;
        return l;
    };
    auto dropout = [](std::string n, double rate) {
        LayerSpec l;
        l.name = std::move(n);
        l.kind = LayerKind::Dropout;
        l.rate = rate;
        return l;
    };
    auto dense = [](std::string n, int64_t units, bool relu) {
        LayerSpec l;
        l.name = std::move(n);
        l.kind = LayerKind::Dense;
        l.units = units;
        l.relu = relu;
        return l;
    };
    LayerSpec pool;
    pool.name = "pool";
    LayerKind conv_kind;
    if (name == "h-cnn") {
        m.input_rows = 34;
        m.input_cols = 30;
        conv_kind = LayerKind::HexConv;
        pool.kind = LayerKind::HexMaxPool;
    } else if (name == "s-cnn" || name == "s-cnn-3x3") {
        m.input_rows = 32;
        m.input_cols = 32;
        conv_kind = LayerKind::SquareConv;
        pool.kind = LayerKind::SquareMaxPool;
        pool.kernel = name == "s-cnn" ? 2 : 3;
        pool.stride = pool.kernel;
    } else {
        throw std::invalid_argument("unknown model preset '" + std::string(name) + "'");
    }
    m.layers = {
        conv("conv1", conv_kind, 32, 1), conv("conv2", conv_kind, 32, 2), dropout("dropout1", 0.25),
        conv("conv3", conv_kind, 64, 1), pool,
        dropout("dropout2", 0.25),
        LayerSpec{"flatten", LayerKind::Flatten, 0, 0, 1, 0.0, false},
        dense("dense1", 128, true), dropout("dropout3", 0.5), dense("dense2", classes, false),
    };
    return m;
}

std::string group_digits(int64_t v) {
    std::string digits = std::to_string(v < 0 ? -v : v);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i && (digits.size() - i) % 3 == 0) out += ' ';
        out += digits[i];
    }
    return v < 0 ? "-" + out : out;
}

namespace {

std::string size_label(const LayerSpec& l) {
    std::ostringstream os;
    switch (l.kind) {
        case LayerKind::HexConv:
        case LayerKind::HexMaxPool: return "7^1";
        case LayerKind::SquareConv:
        case LayerKind::SquareMaxPool: os << l.kernel << "x" << l.kernel; return os.str();
        case LayerKind::Dropout: os << l.rate; return os.str();
        case LayerKind::Flatten: return "/";
        case LayerKind::Dense: return std::to_string(l.units);
    }
    return "?";
}

}  // namespace

std::string summary_table(const ModelSpec& spec) {
    const ModelInfo info = analyze(spec);
    std::ostringstream os;
    os << std::left << std::setw(10) << "Layer" << std::setw(12) << "Type" << std::setw(13) << "Size / rate"
       << std::setw(15) << "Output shape" << std::right << std::setw(10) << "Param #" << "\n";
    os << std::string(60, '-') << "\n";
    for (const auto& li : info.layers) {
        os << std::left << std::setw(10) << li.spec->name << std::setw(12) << to_string(li.spec->kind)
           << std::setw(13) << size_label(*li.spec) << std::setw(15) << li.output.str() << std::right
           << std::setw(10) << group_digits(li.params) << "\n";
    }
    os << std::string(60, '-') << "\n";
    os << "Total trainable params: " << group_digits(info.total_params) << "\n";
    return os.str();
}

Eigen::VectorXd glorot_uniform(int64_t fan_in, int64_t fan_out, int64_t count, std::mt19937_64& rng) {
    if (fan_in + fan_out <= 0) throw std::invalid_argument("glorot_uniform: fans must be positive");
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> uni(-limit, limit);
    Eigen::VectorXd out(count);
    for (int64_t i = 0; i < count; ++i) out[i] = uni(rng);
    return out;
}

namespace {

class HexConvLayer final : public Layer {
public:
    HexConvLayer(const LayerSpec& spec, int64_t in_channels)
        : spec_(spec), kernel_(in_channels, spec.units) {}

    void initialize(std::mt19937_64& rng) override {
        const int64_t cin = kernel_.in_channels, cout = kernel_.out_channels;
        const auto w = glorot_uniform(kHexTaps * cin, kHexTaps * cout, kernel_.weights.size(), rng);
        std::copy(w.data(), w.data() + w.size(), kernel_.weights.data());
        kernel_.bias.setZero();
    }

    Tensor forward(const Tensor& x, bool, std::mt19937_64&) override {
        input_ = x;
        output_ = hconv2d_forward(x, kernel_, spec_.stride);
        if (spec_.relu) relu_inplace(output_.data());
        return output_;
    }

    Tensor backward(const Tensor& grad_out) override {
        Tensor g = grad_out;
        if (spec_.relu) relu_backward_inplace(g.data(), output_.data());
        auto grads = hconv2d_backward(input_, kernel_, spec_.stride, g);
        dw_ = std::move(grads.weights);
        db_ = std::move(grads.bias);
        return std::move(grads.input);
    }

    std::vector<ParamView> params() override {
        if (dw_.size() != kernel_.weights.size()) dw_ = Matrix::Zero(kernel_.weights.rows(), kernel_.weights.cols());
        if (db_.size() != kernel_.bias.size()) db_ = Eigen::VectorXd::Zero(kernel_.bias.size());
        return {{spec_.name + "/kernel", {kHexTaps, kernel_.in_channels, kernel_.out_channels},
                 kernel_.weights.data(), dw_.data(), kernel_.weights.size()},
                {spec_.name + "/bias", {kernel_.out_channels}, kernel_.bias.data(), db_.data(), kernel_.bias.size()}};
    }

private:
    LayerSpec spec_;
    HexKernelPair<double> kernel_;
    Matrix dw_;
    Eigen::VectorXd db_;
    Tensor input_, output_;
};

class SquareConvLayer final : public Layer {
public:
    SquareConvLayer(const LayerSpec& spec, int64_t in_channels)
        : spec_(spec), kernel_(spec.kernel, in_channels, spec.units) {}

    void initialize(std::mt19937_64& rng) override {
        const int64_t area = kernel_.size * kernel_.size;
        const auto w = glorot_uniform(area * kernel_.in_channels, area * kernel_.out_channels,
                                      kernel_.weights.size(), rng);
        std::copy(w.data(), w.data() + w.size(), kernel_.weights.data());
        kernel_.bias.setZero();
    }

    Tensor forward(const Tensor& x, bool, std::mt19937_64&) override {
        input_ = x;
        output_ = sconv2d_forward(x, kernel_, spec_.stride);
        if (spec_.relu) relu_inplace(output_.data());
        return output_;
    }

    Tensor backward(const Tensor& grad_out) override {
        Tensor g = grad_out;
        if (spec_.relu) relu_backward_inplace(g.data(), output_.data());
        auto grads = sconv2d_backward(input_, kernel_, spec_.stride, g);
        dw_ = std::move(grads.weights);
        db_ = std::move(grads.bias);
        return std::move(grads.input);
    }

    std::vector<ParamView> params() override {
        if (dw_.size() != kernel_.weights.size()) dw_ = Matrix::Zero(kernel_.weights.rows(), kernel_.weights.cols());
        if (db_.size() != kernel_.bias.size()) db_ = Eigen::VectorXd::Zero(kernel_.bias.size());
        return {{spec_.name + "/kernel", {kernel_.size, kernel_.size, kernel_.in_channels, kernel_.out_channels},
                 kernel_.weights.data(), dw_.data(), kernel_.weights.size()},
                {spec_.name + "/bias", {kernel_.out_channels}, kernel_.bias.data(), db_.data(), kernel_.bias.size()}};
    }

private:
    LayerSpec spec_;
    SquareKernel<double> kernel_;
    Matrix dw_;
    Eigen::VectorXd db_;
    Tensor input_, output_;
};

class PoolLayer final : public Layer {
public:
    explicit PoolLayer(const LayerSpec& spec) : spec_(spec) {}

    Tensor forward(const Tensor& x, bool, std::mt19937_64&) override {
        input_shape_ = x.shape();
        auto res = spec_.kind == LayerKind::HexMaxPool ? hmaxpool_forward(x) : smaxpool_forward(x, spec_.kernel);
        argmax_ = std::move(res.argmax);
        return std::move(res.output);
    }

    Tensor backward(const Tensor& grad_out) override { return maxpool_backward(input_shape_, argmax_, grad_out); }

private:
    LayerSpec spec_;
    Shape4 input_shape_;
    std::vector<int64_t> argmax_;
};

class DropoutLayer final : public Layer {
public:
    explicit DropoutLayer(const LayerSpec& spec) : spec_(spec) {}

    Tensor forward(const Tensor& x, bool training, std::mt19937_64& rng) override {
        if (!training || spec_.rate == 0.0) {
            mask_.resize(0);
            return x;
        }
        mask_ = dropout_mask<double>(x.size(), spec_.rate, rng);
        Tensor y = x;
        y.data() *= mask_;
        return y;
    }

    Tensor backward(const Tensor& grad_out) override {
        if (mask_.size() == 0) return grad_out;
        Tensor g = grad_out;
        g.data() *= mask_;
        return g;
    }

private:
    LayerSpec spec_;
    Eigen::ArrayXd mask_;
};

class FlattenLayer final : public Layer {
public:
    Tensor forward(const Tensor& x, bool, std::mt19937_64&) override {
        input_shape_ = x.shape();
        return x.reshaped({x.batch(), 1, 1, x.shape().sample_size()});
    }
    Tensor backward(const Tensor& grad_out) override { return grad_out.reshaped(input_shape_); }

private:
    Shape4 input_shape_;
};

class DenseLayer final : public Layer {
public:
    DenseLayer(const LayerSpec& spec, int64_t in_features)
        : spec_(spec), w_(Matrix::Zero(in_features, spec.units)), b_(Eigen::VectorXd::Zero(spec.units)) {}

    void initialize(std::mt19937_64& rng) override {
        const auto w = glorot_uniform(w_.rows(), w_.cols(), w_.size(), rng);
        std::copy(w.data(), w.data() + w.size(), w_.data());
        b_.setZero();
    }

    Tensor forward(const Tensor& x, bool, std::mt19937_64&) override {
        input_ = x;
        Tensor y(x.batch(), 1, 1, spec_.units);
        y.as_matrix() = dense_forward<double>(x.as_matrix(), w_, b_);
        if (spec_.relu) relu_inplace(y.data());
        output_ = y;
        return y;
    }

    Tensor backward(const Tensor& grad_out) override {
        Tensor g = grad_out;
        if (spec_.relu) relu_backward_inplace(g.data(), output_.data());
        auto grads = dense_backward<double>(input_.as_matrix(), w_, g.as_matrix());
        dw_ = std::move(grads.weights);
        db_ = std::move(grads.bias);
        Tensor dx(input_.shape());
        dx.as_matrix() = grads.input;
        return dx;
    }

    std::vector<ParamView> params() override {
        if (dw_.size() != w_.size()) dw_ = Matrix::Zero(w_.rows(), w_.cols());
        if (db_.size() != b_.size()) db_ = Eigen::VectorXd::Zero(b_.size());
        return {{spec_.name + "/kernel", {w_.rows(), w_.cols()}, w_.data(), dw_.data(), w_.size()},
                {spec_.name + "/bias", {b_.size()}, b_.data(), db_.data(), b_.size()}};
    }

private:
    LayerSpec spec_;
    Matrix w_;
    Eigen::VectorXd b_;
    Matrix dw_;
    Eigen::VectorXd db_;
    Tensor input_, output_;
};

}  // namespace

Network::Network(ModelSpec spec) : spec_(std::move(spec)) {
    const ModelInfo info = analyze(spec_);
    LayerShape in{{spec_.input_rows, spec_.input_cols, spec_.input_channels}};
    for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
        const LayerSpec& l = spec_.layers[i];
        switch (l.kind) {
            case LayerKind::HexConv: layers_.push_back(std::make_unique<HexConvLayer>(l, in.dims[2])); break;
            case LayerKind::SquareConv: layers_.push_back(std::make_unique<SquareConvLayer>(l, in.dims[2])); break;
            case LayerKind::HexMaxPool:
            case LayerKind::SquareMaxPool: layers_.push_back(std::make_unique<PoolLayer>(l)); break;
            case LayerKind::Dropout: layers_.push_back(std::make_unique<DropoutLayer>(l)); break;
            case LayerKind::Flatten: layers_.push_back(std::make_unique<FlattenLayer>()); break;
            case LayerKind::Dense: layers_.push_back(std::make_unique<DenseLayer>(l, in.dims[0])); break;
        }
        in = info.layers[i].output;
    }
}

Network::Network(Network&&) noexcept = default;
Network& Network::operator=(Network&&) noexcept = default;
Network::~Network() = default;

void Network::initialize(uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (auto& l : layers_) l->initialize(rng);
}

Tensor Network::forward(const Tensor& x, bool training, std::mt19937_64& rng) {
    if (x.rows() != spec_.input_rows || x.cols() != spec_.input_cols || x.channels() != spec_.input_channels) {
        throw std::invalid_argument("Network::forward: input shape " + to_string(x.shape()) + " does not match model '" +
                                    spec_.name + "'");
    }
    Tensor a = x;
    for (auto& l : layers_) a = l->forward(a, training, rng);
    return a;
}

void Network::backward(const Tensor& grad_logits) {
    Tensor g = grad_logits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
}

std::vector<ParamView> Network::params() {
    std::vector<ParamView> out;
    for (auto& l : layers_) {
        auto p = l->params();
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

int64_t Network::parameter_count() {
    int64_t n = 0;
    for (const auto& p : params()) n += p.size;
    return n;
}

void adam_step(std::span<const ParamView> params, AdamState& state, const AdamConfig& cfg) {
    if (state.m.size() != params.size()) {
        state.m.clear();
        state.v.clear();
        for (const auto& p : params) {
            state.m.push_back(Eigen::VectorXd::Zero(p.size));
            state.v.push_back(Eigen::VectorXd::Zero(p.size));
        }
        state.step = 0;
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& p = params[i];
        Eigen::Map<Eigen::VectorXd> w(p.value, p.size);
        Eigen::Map<const Eigen::VectorXd> g(p.grad, p.size);
        auto& m = state.m[i];
        auto& v = state.v[i];
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
        w.array() -= cfg.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.eps);
    }
}

}  // namespace hexkit::nn
