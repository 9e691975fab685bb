// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fail.
#include <chrono>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "hexkit/grid.hpp"
#include "hexkit/io/dataset.hpp"
#include "hexkit/io/hexa_file.hpp"
#include "hexkit/io/idx.hpp"
#include "hexkit/metrics.hpp"
#include "hexkit/nn/assignment.hpp"
#include "hexkit/nn/dense.hpp"
#include "hexkit/nn/hex_conv.hpp"
#include "hexkit/nn/hex_pool.hpp"
#include "hexkit/nn/model.hpp"
#include "hexkit/nn/square.hpp"
#include "hexkit/nn/train.hpp"
#include "hexkit/nn/weights_io.hpp"
#include "hexkit/transform.hpp"
#include "support.hpp"

using namespace hexkit;
using namespace hexkit::nn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<std::string> split_columns(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    int spaces = 0;
    for (char ch : line) {
        if (ch == ' ') {
            ++spaces;
            continue;
        }
        if (spaces >= 2 && !cur.empty()) {
            out.push_back(cur);
            cur.clear();
        } else if (spaces == 1) {
            cur += ' ';
        }
        spaces = 0;
        cur += ch;
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// ---------------------------------------------------------------------------

Outcome architecture() {
    using Row = std::vector<std::string>;
    const std::vector<Row> s_rows{
        {"conv1", "SConv2D", "3x3", "(32, 32, 32)", "896"},
        {"conv2", "SConv2D", "3x3", "(16, 16, 32)", "9 248"},
        {"dropout1", "Dropout", "0.25", "(16, 16, 32)", "0"},
        {"conv3", "SConv2D", "3x3", "(16, 16, 64)", "18 496"},
        {"pool", "SMaxPool2D", "2x2", "(8, 8, 64)", "0"},
        {"dropout2", "Dropout", "0.25", "(8, 8, 64)", "0"},
        {"flatten", "Flatten", "/", "(4096)", "0"},
        {"dense1", "Dense", "128", "(128)", "524 416"},
        {"dropout3", "Dropout", "0.5", "(128)", "0"},
        {"dense2", "Dense", "100", "(100)", "12 900"},
    };
    const std::vector<Row> h_rows{
        {"conv1", "HConv2D", "7^1", "(34, 30, 32)", "704"},
        {"conv2", "HConv2D", "7^1", "(18, 15, 32)", "7 200"},
        {"dropout1", "Dropout", "0.25", "(18, 15, 32)", "0"},
        {"conv3", "HConv2D", "7^1", "(18, 15, 64)", "14 400"},
        {"pool", "HMaxPool2D", "7^1", "(8, 5, 64)", "0"},
        {"dropout2", "Dropout", "0.25", "(8, 5, 64)", "0"},
        {"flatten", "Flatten", "/", "(2560)", "0"},
        {"dense1", "Dense", "128", "(128)", "327 808"},
        {"dropout3", "Dropout", "0.5", "(128)", "0"},
        {"dense2", "Dense", "100", "(100)", "12 900"},
    };
    std::ostringstream detail;
    bool ok = true;
    for (const auto& [name, rows, total] : {std::tuple{"s-cnn", s_rows, std::string("565 956")},
                                            std::tuple{"h-cnn", h_rows, std::string("363 012")}}) {
        std::istringstream table(summary_table(preset(name)));
        std::vector<std::string> lines;
        for (std::string l; std::getline(table, l);) lines.push_back(l);
        bool rows_ok = lines.size() == rows.size() + 4;
        for (std::size_t i = 0; rows_ok && i < rows.size(); ++i) rows_ok = split_columns(lines[i + 2]) == rows[i];
        const bool total_ok = !lines.empty() && lines.back() == "Total trainable params: " + total;
        ok = ok && rows_ok && total_ok;
        detail << name << ": " << (rows_ok ? "rows match" : "row mismatch") << ", "
               << (lines.empty() ? std::string("<empty>") : lines.back()) << "; ";
    }
    return {ok, detail.str()};
}

Outcome grid_sizing() {
    const auto g = choose_grid(32, 32);
    return {g.rows() == 34 && g.cols() == 30,
            "choose_grid(32,32) = " + std::to_string(g.rows()) + "x" + std::to_string(g.cols())};
}

Outcome hex_block_law() {
    bool ok = true;
    std::ostringstream detail;
    for (int64_t n = 1; n <= 12; ++n) {
        std::set<std::array<int64_t, 2>> brute;
        for (int64_t x = 0; x < 2 * n - 1; ++x)
            for (int64_t y = 0; y < 2 * n - 1; ++y)
                if (std::abs(x - y) < n) brute.insert({x, y});
        const auto block = hex_block(n);
        const std::set<std::array<int64_t, 2>> got(block.members.begin(), block.members.end());
        const bool match = got == brute && static_cast<int64_t>(brute.size()) == 3 * n * n - 3 * n + 1 &&
                           hex_block_size(n) == static_cast<int64_t>(brute.size()) && block.size() == hex_block_size(n);
        ok = ok && match;
        if (!match) detail << "N=" << n << " mismatch; ";
    }
    detail << "N in [1,12], M(12) = " << hex_block_size(12);
    return {ok, detail.str()};
}

Outcome hungarian() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    int matched = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd c(7, 7);
        for (int i = 0; i < 49; ++i) c.data()[i] = u(rng);
        std::vector<int> p(7);
        std::iota(p.begin(), p.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            double s = 0.0;
            for (int i = 0; i < 7; ++i) s += c(i, p[static_cast<std::size_t>(i)]);
            best = std::min(best, s);
        } while (std::next_permutation(p.begin(), p.end()));
        const auto a = assignment_solve(c);
        double s = 0.0;
        for (int i = 0; i < 7; ++i) s += c(i, a.permutation[static_cast<std::size_t>(i)]);
        matched += s == best;
    }
    return {matched == 20, std::to_string(matched) + "/20 equal to 7! enumeration"};
}

// Central differences of a scalar loss against analytic gradients.
struct GradCheck {
    int instances = 0;
    int failures = 0;
    double worst = 0.0;

    void check(const std::function<double()>& loss, double* values, const double* analytic, int64_t n,
               int64_t step = 1) {
        for (int64_t i = 0; i < n; i += step) {
            const double num = testsupport::numeric_derivative(loss, values[i]);
            const double scale = std::max({std::abs(num), std::abs(analytic[i]), 1.0});
            worst = std::max(worst, std::abs(num - analytic[i]) / scale);
            failures += !testsupport::gradient_close(analytic[i], num);
        }
    }
};

Outcome gradient_suite() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::map<std::string, GradCheck> kinds;
    auto fill = [&](auto& m) {
        for (int64_t i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    };
    auto dot = [](const Tensor4<double>& a, const Tensor4<double>& b) { return (a.data() * b.data()).sum(); };

    for (int inst = 0; inst < 10; ++inst) {
        for (int64_t stride : {1, 2}) {
            auto x = testsupport::random_tensor({2, 6, 5, 2}, rng);
            HexKernelPair<double> k(2, 3);
            fill(k.weights);
            fill(k.bias);
            const auto g = testsupport::random_tensor(hconv2d_forward(x, k, stride).shape(), rng);
            const auto grads = hconv2d_backward(x, k, stride, g);
            auto loss = [&] { return dot(hconv2d_forward(x, k, stride), g); };
            auto& gc = kinds[stride == 1 ? "hconv-s1" : "hconv-s2"];
            gc.check(loss, x.data().data(), grads.input.data().data(), x.size(), 3);
            gc.check(loss, k.weights.data(), grads.weights.data(), k.weights.size(), 2);
            gc.check(loss, k.bias.data(), grads.bias.data(), k.bias.size());
            ++gc.instances;
        }
        {
            auto x = testsupport::random_tensor({1, 7, 6, 2}, rng);
            const auto res = hmaxpool_forward(x);
            const auto g = testsupport::random_tensor(res.output.shape(), rng);
            const auto dx = hmaxpool_backward(x.shape(), res.argmax, g);
            auto& gc = kinds["hmaxpool"];
            gc.check([&] { return dot(hmaxpool_forward(x).output, g); }, x.data().data(), dx.data().data(), x.size());
            ++gc.instances;
        }
        {
            auto x = testsupport::random_tensor({1, 6, 5, 2}, rng);
            SquareKernel<double> k(3, 2, 2);
            fill(k.weights);
            fill(k.bias);
            const int64_t stride = 1 + inst % 2;
            const auto g = testsupport::random_tensor(sconv2d_forward(x, k, stride).shape(), rng);
            const auto grads = sconv2d_backward(x, k, stride, g);
            auto loss = [&] { return dot(sconv2d_forward(x, k, stride), g); };
            auto& gc = kinds["sconv"];
            gc.check(loss, x.data().data(), grads.input.data().data(), x.size(), 2);
            gc.check(loss, k.weights.data(), grads.weights.data(), k.weights.size(), 2);
            ++gc.instances;
        }
        {
            auto x = testsupport::random_tensor({1, 7, 6, 2}, rng);
            const auto res = smaxpool_forward(x, 2);
            const auto g = testsupport::random_tensor(res.output.shape(), rng);
            const auto dx = maxpool_backward(x.shape(), res.argmax, g);
            auto& gc = kinds["smaxpool"];
            gc.check([&] { return dot(smaxpool_forward(x, 2).output, g); }, x.data().data(), dx.data().data(), x.size());
            ++gc.instances;
        }
        {
            RowMatrix<double> x(3, 6), w(6, 4), g(3, 4);
            Vector<double> b(4);
            fill(x);
            fill(w);
            fill(g);
            fill(b);
            const auto grads = dense_backward(x, w, g);
            auto loss = [&] { return (dense_forward(x, w, b).array() * g.array()).sum(); };
            auto& gc = kinds["dense"];
            gc.check(loss, x.data(), grads.input.data(), x.size());
            gc.check(loss, w.data(), grads.weights.data(), w.size());
            gc.check(loss, b.data(), grads.bias.data(), b.size());
            ++gc.instances;
        }
        {
            RowMatrix<double> logits(4, 5);
            for (int64_t i = 0; i < logits.size(); ++i) logits.data()[i] = 3.0 * u(rng);
            std::vector<int> labels(4);
            for (auto& l : labels) l = static_cast<int>(rng() % 5);
            const auto out = softmax_xent(logits, labels);
            auto& gc = kinds["softmax-xent"];
            gc.check([&] { return softmax_xent(logits, labels).loss; }, logits.data(), out.grad.data(), logits.size());
            ++gc.instances;
        }
    }
    bool ok = true;
    std::ostringstream detail;
    for (const auto& [name, gc] : kinds) {
        ok = ok && gc.failures == 0 && gc.instances >= 10;
        detail << name << " " << gc.instances << " inst, worst rel " << std::scientific << std::setprecision(1)
               << gc.worst << "; ";
    }
    return {ok, detail.str()};
}

Outcome metric_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.4, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Image img = testsupport::random_image(8, 8, rng);
        const auto hex = s2h(img, *grid_for_radius(8, 8, u(rng)), InterpMode::Bilinear);
        const double oracle = testsupport::supersampled_mse(img, hex, 64);
        worst = std::max(worst, std::abs(weighted_mse(img, hex) - oracle) / oracle);
    }
    double worst_area = 0.0;
    int interior = 0;
    for (double radius : {0.45, 0.8, 1.3, 2.3}) {
        const auto spec = *grid_for_radius(24, 20, radius);
        std::map<int64_t, double> per_cell;
        for (const auto& o : hex_overlaps(spec, 24, 20)) per_cell[o.cell] += o.area;
        const Eigen::Vector2d origin = grid_origin(spec, 24, 20);
        for (const auto& [cell, area] : per_cell) {
            const Eigen::Vector2d c = origin + lattice_center(cell / spec.cols(), cell % spec.cols(), spec.pitch());
            if (c.x() - spec.pitch() / 2 < 0 || c.x() + spec.pitch() / 2 > 24 || c.y() - radius < 0 ||
                c.y() + radius > 20)
                continue;
            ++interior;
            worst_area = std::max(worst_area, std::abs(area - spec.hex_area()) / spec.hex_area());
        }
    }
    std::ostringstream detail;
    detail << "worst rel mse gap " << std::setprecision(3) << worst * 100 << "% over 20 pairs; area conservation "
           << std::scientific << std::setprecision(1) << worst_area << " over " << interior << " interior hexagons";
    return {worst <= 0.01 && worst_area <= 1e-9 && interior > 0, detail.str()};
}

Outcome delta_sign() {
    Image radial(128, 128, 1), stripes(128, 128, 1);
    for (int64_t y = 0; y < 128; ++y)
        for (int64_t x = 0; x < 128; ++x) {
            const double r = std::hypot(x + 0.5 - 64.0, y + 0.5 - 64.0);
            radial(x, y, 0) = std::clamp(255.0 * (1.0 - r / 91.0), 0.0, 255.0);
            stripes(x, y, 0) = (x % 2) * 255.0;
        }
    const std::vector<double> mid{1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0};
    std::ostringstream detail;
    double found = 0.0, best_mid = -kInfinity;
    for (double r : mid) {
        const double dr = efficiency_at(radial, r).delta;
        best_mid = std::max(best_mid, dr);
        if (found == 0.0 && dr > 0.0) {
            const double ds = efficiency_at(stripes, r).delta;
            if (ds < 0.0) {
                found = r;
                detail << std::fixed << std::setprecision(3) << "R=" << r << ": radial dT=" << dr
                       << ", stripes dT=" << ds << "; ";
            }
        }
    }
    const double pixel = efficiency_at(radial, 1.0 / kSqrt3).delta;
    detail << std::fixed << std::setprecision(3) << "radial dT at pixel scale " << pixel << " < mid-range max "
           << best_mid;
    return {found > 0.0 && pixel < best_mid, detail.str()};
}

Outcome training(const fs::path& data) {
    const auto train_raw = io::ingest_mnist(data / "train-images.idx", data / "train-labels.idx");
    const auto test_raw = io::ingest_mnist(data / "test-images.idx", data / "test-labels.idx");
    const auto train_ds = io::from_mnist(train_raw, false);
    const auto test_ds = io::from_mnist(test_raw, true);
    std::ostringstream detail;
    detail << train_ds.size() << "/" << test_ds.size() << " images; ";
    bool ok = train_ds.size() == 2000 && test_ds.size() == 1000;
    for (const char* name : {"h-cnn", "s-cnn"}) {
        const auto spec = preset(name, 1, 10);
        const auto tr = io::to_samples(train_ds.images, train_ds.labels, spec, InterpMode::Bilinear);
        const auto te = io::to_samples(test_ds.images, test_ds.labels, spec, InterpMode::Bilinear);
        TrainConfig cfg;
        cfg.epochs = 5;
        cfg.batch_size = 32;
        cfg.seed = 1;
        std::vector<uint8_t> weights[2];
        double acc[2] = {0, 0};
        for (int rep = 0; rep < 2; ++rep) {
            Network net(spec);
            acc[rep] = train(net, tr, &te, cfg).test_accuracy;
            weights[rep] = encode_weights(net);
        }
        const bool same = weights[0] == weights[1] && acc[0] == acc[1];
        ok = ok && acc[0] >= 0.90 && same;
        detail << name << " acc " << std::fixed << std::setprecision(3) << acc[0]
               << (same ? " (bitwise repeatable)" : " (runs differ)") << "; ";
    }
    return {ok, detail.str()};
}

Outcome throughput() {
    std::vector<Image> images;
    for (int k = 0; k < 4; ++k) {
        Image img(128, 128, 1);
        for (int64_t y = 0; y < 128; ++y)
            for (int64_t x = 0; x < 128; ++x)
                img(x, y, 0) = 127.5 + 127.5 * std::sin(0.05 * (k + 1) * x + 0.07 * y) * std::cos(0.03 * x * y / 128.0);
        images.push_back(std::move(img));
    }
    const auto spec = choose_grid(128, 128);
    volatile double sink = 0;
    auto rate = [&](const std::function<void()>& fn) {
        fn();
        std::vector<double> rates;
        for (int run = 0; run < 5; ++run) {
            const auto t0 = Clock::now();
            fn();
            rates.push_back(static_cast<double>(images.size()) / std::max(seconds_since(t0), 1e-12));
        }
        return std::accumulate(rates.begin(), rates.end(), 0.0) / 5.0;
    };
    const double hex = rate([&] {
        for (const auto& img : images) sink = sink + s2h(img, spec, InterpMode::Bilinear).data()[0];
    });
    const double square = rate([&] {
        for (const auto& img : images) sink = sink + resize(img, spec.cols(), spec.rows(), InterpMode::Bilinear).data()[0];
    });
    std::ostringstream detail;
    detail << std::fixed << std::setprecision(1) << "s2h " << hex << " img/s vs square-resize " << square
           << " img/s (ratio " << std::setprecision(2) << hex / square << ")";
    return {hex >= 0.5 * square, detail.str()};
}

Outcome round_trips() {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> n(0.0, 100.0);
    bool hexa_ok = true;
    const fs::path path = fs::temp_directory_path() / "hexkit_acceptance.hexa";
    for (const auto& spec : {HexGridSpec(34, 30), HexGridSpec(1, 1, 2.5), HexGridSpec(7, 9, 0.731)}) {
        HexArray<double> hex(spec, 3);
        for (int64_t i = 0; i < hex.data().size(); ++i) hex.data()[i] = n(rng);
        io::write_hexa(path, hex);
        const auto back = io::read_hexa(path);
        hexa_ok = hexa_ok && back.spec().rows() == spec.rows() && back.spec().cols() == spec.cols() &&
                  back.spec().pitch() == spec.pitch() && back.channels() == 3 &&
                  std::memcmp(back.data().data(), hex.data().data(), sizeof(double) * hex.data().size()) == 0;
    }
    fs::remove(path);

    bool linewise_ok = true;
    int64_t cells = 0;
    for (const auto& spec : {HexGridSpec(1, 1), HexGridSpec(3, 3), HexGridSpec(7, 8), HexGridSpec(34, 30),
                             HexGridSpec(18, 15), HexGridSpec(8, 5), HexGridSpec(43, 37)}) {
        for (int64_t r = 0; r < spec.rows(); ++r)
            for (int64_t c = 0; c < spec.cols(); ++c, ++cells) {
                const auto back = axial_to_linewise(linewise_to_axial({r, c}, spec), spec);
                linewise_ok = linewise_ok && back && *back == Cell{r, c};
            }
    }

    bool spiral_ok = true;
    int64_t addresses = 0;
    const HexGridSpec big(101, 101);
    for (std::size_t order = 1; order <= 4; ++order) {
        std::map<HexCoord, uint64_t> inverse;
        const auto count = static_cast<uint64_t>(std::pow(7, order));
        for (uint64_t v = 0; v < count; ++v, ++addresses) {
            const auto addr = SpiralAddress::from_value(v, order);
            spiral_ok = spiral_ok && addr.value() == v && SpiralAddress(addr.digits()).value() == v;
            const HexCoord a = spiral_to_axial(addr);
            const auto cell = axial_to_linewise(a, big);
            spiral_ok = spiral_ok && cell.has_value() && linewise_to_axial(*cell, big) == a;
            spiral_ok = spiral_ok && inverse.emplace(a, v).second;
        }
        for (const auto& [a, v] : inverse) spiral_ok = spiral_ok && spiral_to_axial(SpiralAddress::from_value(v, order)) == a;
    }
    std::ostringstream detail;
    detail << "HexaFile bitwise " << (hexa_ok ? "ok" : "FAILED") << "; linewise<->axial " << cells << " cells "
           << (linewise_ok ? "ok" : "FAILED") << "; spiral<->axial<->linewise " << addresses << " addresses "
           << (spiral_ok ? "ok" : "FAILED");
    return {hexa_ok && linewise_ok && spiral_ok, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
    fs::path data = HEXKIT_MNIST_DIR;
    bool skip_training = false;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--skip-training") skip_training = true;
        else if (a == "--data" && i + 1 < argc) data = argv[++i];
        else {
            std::cerr << "usage: acceptance [--data DIR] [--skip-training]\n";
            return 2;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"architecture arithmetic", architecture},
        {"grid sizing", grid_sizing},
        {"hex block law", hex_block_law},
        {"hungarian optimality", hungarian},
        {"gradient suite", gradient_suite},
        {"metric oracle", metric_oracle},
        {"delta-T sign property", delta_sign},
        {"scaled training", [&] { return skip_training ? Outcome{false, "skipped"} : training(data); }},
        {"throughput", throughput},
        {"round-trips", round_trips},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failed += !out.pass;
        std::cout << (out.pass ? "PASS" : "FAIL") << " " << i + 1 << ". " << criteria[i].first << " — " << out.detail
                  << " [" << std::fixed << std::setprecision(2) << seconds_since(t0) << " s]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
