#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hexkit/io/binary.hpp"
#include "hexkit/io/dataset.hpp"
#include "hexkit/io/errors.hpp"
#include "hexkit/io/hexa_file.hpp"
#include "hexkit/io/idx.hpp"
#include "hexkit/io/image_io.hpp"
#include "hexkit/metrics.hpp"
#include "hexkit/nn/model.hpp"
#include "hexkit/nn/train.hpp"
#include "hexkit/nn/weights_io.hpp"
#include "hexkit/render.hpp"
#include "hexkit/transform.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hexkit;

namespace {

enum Exit { kOk = 0, kUsage = 2, kIo = 3, kFormat = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input;
    std::string output;
    std::string interp = "bilinear";
    std::optional<double> radius;
    bool equal_count = false;
    std::optional<int64_t> rows, cols;
    std::string model = "h-cnn";
    std::string data;
    std::string weights;
    int64_t epochs = 5;
    int64_t batch_size = 32;
    uint64_t seed = 0;
    int runs = 5;
    int warmup = 1;
    int threads = 1;
    std::string format;  // empty: the subcommand's default
    double scale = 10.0;
    int supersample = 1;
    std::vector<double> radii;
    int64_t size = 128;
    int64_t channels = 3;
    int64_t classes = 100;
};

bool is_hexa(const std::string& path) { return fs::path(path).extension() == ".hexa"; }

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

json json_double(double v) { return std::isfinite(v) ? json(v) : json(fmt_double(v)); }

// Grid requested by --radius / --rows --cols / --equal-count (the default).
HexGridSpec requested_grid(const Options& o, const Image& img) {
    if (o.radius) {
        auto spec = grid_for_radius(img.width(), img.height(), *o.radius);
        if (!spec) throw UsageError("radius " + fmt_double(*o.radius) + " yields an empty grid for this image");
        return *spec;
    }
    if (o.rows || o.cols) {
        if (!o.rows || !o.cols) throw UsageError("--rows and --cols must be given together");
        const double span = static_cast<double>(*o.cols) + (*o.rows > 1 ? 0.5 : 0.0);
        return HexGridSpec(*o.rows, *o.cols, static_cast<double>(img.width()) / span);
    }
    return choose_grid(img.width(), img.height());
}

HexArray<double> load_hex(const Options& o) {
    if (is_hexa(o.input)) return io::read_hexa(o.input);
    const Image img = io::read_image(o.input);
    return s2h(img, requested_grid(o, img), parse_interp(o.interp), o.threads);
}

int cmd_transform(const Options& o) {
    const InterpMode mode = parse_interp(o.interp);
    if (is_hexa(o.input)) {
        const auto hex = io::read_hexa(o.input);
        const auto& spec = hex.spec();
        const auto w = static_cast<int64_t>(std::lround(spec.width()));
        const auto h = static_cast<int64_t>(std::lround(spec.height()));
        io::write_image(o.output, h2s(hex, w, h, mode, o.threads));
        std::cout << "h2s " << spec.rows() << "x" << spec.cols() << " -> " << w << "x" << h << " " << o.output << "\n";
        return kOk;
    }
    const Image img = io::read_image(o.input);
    const HexGridSpec spec = requested_grid(o, img);
    const auto hex = s2h(img, spec, mode, o.threads);
    if (is_hexa(o.output)) {
        io::write_hexa(o.output, hex);
    } else {
        io::write_image(o.output, h2s(hex, img.width(), img.height(), mode, o.threads));
    }
    std::cout << "s2h " << img.width() << "x" << img.height() << " -> " << spec.rows() << "x" << spec.cols()
              << " (R=" << fmt_double(spec.radius()) << ") " << o.output << "\n";
    return kOk;
}

int cmd_render(const Options& o) {
    RenderOptions ro;
    ro.scale = o.scale;
    ro.supersample = o.supersample;
    ro.threads = o.threads;
    const Image out = rasterize(load_hex(o), ro);
    io::write_image(o.output, out);
    std::cout << "rendered " << out.width() << "x" << out.height() << " " << o.output << "\n";
    return kOk;
}

json report_json(const std::string& image, const EfficiencyReport& r) {
    json j{{"image", image},       {"R", r.radius},       {"T_q", json_double(r.t_q)}, {"T_h", json_double(r.t_h)},
           {"delta", json_double(r.delta)}, {"mse_q", r.mse_q}, {"mse_h", r.mse_h},    {"max_i", r.max_i},
           {"hex_rows", r.hex_rows}, {"hex_cols", r.hex_cols}, {"skipped", r.skipped}};
    if (!r.warning.empty()) j["warning"] = r.warning;
    return j;
}

SweepOptions sweep_options(const Options& o) {
    SweepOptions so;
    so.mode = parse_interp(o.interp);
    return so;
}

int cmd_metrics(const Options& o) {
    const Image img = io::read_image(o.input);
    const double radius = o.radius ? *o.radius : requested_grid(o, img).radius();
    const auto report = efficiency_at(img, radius, sweep_options(o));
    if (o.format == "csv") {
        std::cout << "image,R,T_q,T_h,delta\n"
                  << o.input << "," << fmt_double(report.radius) << "," << fmt_double(report.t_q) << ","
                  << fmt_double(report.t_h) << "," << fmt_double(report.delta) << "\n";
    } else {
        std::cout << report_json(o.input, report).dump(2) << "\n";
    }
    return kOk;
}

std::vector<fs::path> image_inputs(const std::string& input) {
    if (!fs::is_directory(input)) return {input};
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(input)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".png" || ext == ".pgm" || ext == ".ppm")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw io::IoError("no images found in '" + input + "'");
    return files;
}

int cmd_sweep(const Options& o) {
    std::vector<double> radii = o.radii;
    if (radii.empty()) {
        for (int i = 1; i <= 16; ++i) radii.push_back(0.25 * i);
    }
    std::ostringstream out;
    json rows = json::array();
    if (o.format != "json") out << "image,R,T_q,T_h,delta\n";
    for (const auto& file : image_inputs(o.input)) {
        const Image img = io::read_image(file);
        for (const auto& r : efficiency_sweep(img, radii, sweep_options(o))) {
            if (r.skipped) {
                std::cerr << "warning: " << file.string() << " R=" << fmt_double(r.radius) << ": " << r.warning << "\n";
                continue;
            }
            if (o.format == "json") {
                rows.push_back(report_json(file.string(), r));
            } else {
                out << file.string() << "," << fmt_double(r.radius) << "," << fmt_double(r.t_q) << ","
                    << fmt_double(r.t_h) << "," << fmt_double(r.delta) << "\n";
            }
        }
    }
    const std::string text = o.format == "json" ? rows.dump(2) + "\n" : out.str();
    if (o.output.empty()) {
        std::cout << text;
    } else {
        io::write_file(o.output, std::vector<uint8_t>(text.begin(), text.end()));
    }
    return kOk;
}

int cmd_summary(const Options& o) {
    std::cout << nn::summary_table(nn::preset(o.model, o.channels, o.classes));
    return kOk;
}

struct Data {
    io::LabeledDataset train, test;
    int64_t classes = 0;
};

std::optional<fs::path> find_file(const fs::path& dir, std::initializer_list<const char*> names) {
    for (const char* n : names) {
        if (fs::exists(dir / n)) return dir / n;
    }
    return std::nullopt;
}

Data load_data(const std::string& dir) {
    if (dir.empty()) throw UsageError("--data is required");
    const fs::path root(dir);
    const auto tri = find_file(root, {"train-images.idx", "train-images-idx3-ubyte"});
    const auto trl = find_file(root, {"train-labels.idx", "train-labels-idx1-ubyte"});
    const auto tei = find_file(root, {"test-images.idx", "t10k-images-idx3-ubyte"});
    const auto tel = find_file(root, {"test-labels.idx", "t10k-labels-idx1-ubyte"});
    Data d;
    if (tri && trl && tei && tel) {
        d.train = io::from_mnist(io::ingest_mnist(*tri, *trl), false);
        d.test = io::from_mnist(io::ingest_mnist(*tei, *tel), true);
        d.classes = 10;
        return d;
    }
    const auto all = io::ingest_image_dir(root);
    d.classes = static_cast<int64_t>(all.classes.size());
    for (auto* part : {&d.train, &d.test}) part->classes = all.classes;
    for (std::size_t i = 0; i < all.size(); ++i) {
        auto& part = all.is_test[i] ? d.test : d.train;
        part.images.push_back(all.images[i]);
        part.labels.push_back(all.labels[i]);
        part.names.push_back(all.names[i]);
        part.is_test.push_back(all.is_test[i]);
    }
    return d;
}

nn::ModelSpec model_for(const Options& o, const Data& d) {
    const auto& any = d.train.images.empty() ? d.test.images : d.train.images;
    if (any.empty()) throw io::IoError("dataset is empty");
    return nn::preset(o.model, any.front().channels(), d.classes);
}

int cmd_train(const Options& o) {
    const Data d = load_data(o.data);
    const auto spec = model_for(o, d);
    const InterpMode mode = parse_interp(o.interp);
    const auto train_set = io::to_samples(d.train.images, d.train.labels, spec, mode, o.threads);
    const auto test_set = io::to_samples(d.test.images, d.test.labels, spec, mode, o.threads);
    nn::Network net(spec);
    nn::TrainConfig cfg;
    cfg.batch_size = o.batch_size;
    cfg.epochs = o.epochs;
    cfg.seed = o.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = nn::train(net, train_set, test_set.size() > 0 ? &test_set : nullptr, cfg,
                                  [&](int64_t epoch, const nn::EpochStats& s) {
                                      if (o.format != "json") {
                                          std::cout << "epoch " << epoch + 1 << "/" << o.epochs
                                                    << " loss=" << fmt_double(s.loss)
                                                    << " acc=" << fmt_double(s.accuracy) << "\n";
                                      }
                                  });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.weights.empty()) nn::save_weights(net, o.weights);
    if (o.format == "json") {
        json hist = json::array();
        for (const auto& h : result.history) hist.push_back({{"loss", h.loss}, {"accuracy", h.accuracy}});
        std::cout << json{{"model", spec.name},
                          {"train_size", train_set.size()},
                          {"test_size", test_set.size()},
                          {"epochs", o.epochs},
                          {"seed", o.seed},
                          {"history", hist},
                          {"test_accuracy", result.test_accuracy},
                          {"test_loss", result.test_loss},
                          {"seconds", seconds}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "test accuracy " << fmt_double(result.test_accuracy) << " (" << test_set.size()
                  << " images), loss " << fmt_double(result.test_loss) << ", " << std::fixed << std::setprecision(1)
                  << seconds << " s\n";
    }
    return kOk;
}

int cmd_eval(const Options& o) {
    if (o.weights.empty()) throw UsageError("--weights is required");
    const Data d = load_data(o.data);
    const auto spec = model_for(o, d);
    nn::Network net(spec);
    nn::load_weights(net, o.weights);
    const auto test_set = io::to_samples(d.test.images, d.test.labels, spec, parse_interp(o.interp), o.threads);
    const auto ev = nn::evaluate(net, test_set);
    if (o.format == "json") {
        std::cout << json{{"model", spec.name}, {"test_size", test_set.size()}, {"accuracy", ev.accuracy},
                          {"loss", ev.loss}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "accuracy " << fmt_double(ev.accuracy) << " loss " << fmt_double(ev.loss) << " ("
                  << test_set.size() << " images)\n";
    }
    return kOk;
}

// Deterministic synthetic bench inputs when no --input is given.
std::vector<Image> bench_images(const Options& o) {
    std::vector<Image> images;
    if (!o.input.empty()) {
        for (const auto& f : image_inputs(o.input)) images.push_back(io::read_image(f));
        return images;
    }
    for (int k = 0; k < 4; ++k) {
        Image img(o.size, o.size, 1);
        for (int64_t y = 0; y < o.size; ++y)
            for (int64_t x = 0; x < o.size; ++x)
                img(x, y, 0) = 127.5 + 127.5 * std::sin(0.05 * (k + 1) * x + 0.07 * y) * std::cos(0.03 * x * y / o.size);
        images.push_back(std::move(img));
    }
    return images;
}

struct BenchStat {
    std::string op;
    double mean = 0, stddev = 0;
};

template <typename Fn>
BenchStat bench_op(const std::string& name, const Options& o, std::size_t images, Fn&& fn) {
    for (int i = 0; i < o.warmup; ++i) fn();
    std::vector<double> rates;
    for (int i = 0; i < o.runs; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rates.push_back(static_cast<double>(images) / std::max(s, 1e-12));
    }
    const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
    double var = 0;
    for (double r : rates) var += (r - mean) * (r - mean);
    const double sd = rates.size() > 1 ? std::sqrt(var / static_cast<double>(rates.size() - 1)) : 0.0;
    return {name, mean, sd};
}

int cmd_bench(const Options& o) {
    if (o.runs < 1) throw UsageError("--runs must be at least 1");
    const InterpMode mode = parse_interp(o.interp);
    const auto images = bench_images(o);
    std::vector<HexGridSpec> specs;
    std::vector<HexArray<double>> hexes;
    for (const auto& img : images) {
        specs.push_back(requested_grid(o, img));
        hexes.push_back(s2h(img, specs.back(), mode, o.threads));
    }
    volatile double sink = 0;
    std::vector<BenchStat> stats;
    stats.push_back(bench_op("s2h", o, images.size(), [&] {
        for (std::size_t i = 0; i < images.size(); ++i) sink = sink + s2h(images[i], specs[i], mode, o.threads).data()[0];
    }));
    stats.push_back(bench_op("h2s", o, images.size(), [&] {
        for (std::size_t i = 0; i < images.size(); ++i)
            sink = sink + h2s(hexes[i], images[i].width(), images[i].height(), mode, o.threads).data()[0];
    }));
    stats.push_back(bench_op("square-resize", o, images.size(), [&] {
        for (std::size_t i = 0; i < images.size(); ++i) {
            const auto& s = specs[i];
            sink = sink + resize(images[i], s.cols(), s.rows(), mode, o.threads).data()[0];
        }
    }));
    const std::string input = o.input.empty() ? "synthetic " + std::to_string(images.size()) + " x " +
                                                    std::to_string(o.size) + "x" + std::to_string(o.size)
                                              : o.input;
    if (o.format == "json") {
        json j = json::array();
        for (const auto& s : stats) {
            j.push_back({{"operation", s.op}, {"images_per_second", s.mean}, {"stddev", s.stddev}, {"runs", o.runs},
                         {"warmup", o.warmup}, {"input", input}, {"threads", o.threads}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "input: " << input << ", runs " << o.runs << ", warmup " << o.warmup << ", threads " << o.threads
                  << "\n";
        for (const auto& s : stats) {
            std::cout << std::left << std::setw(14) << s.op << std::right << std::fixed << std::setprecision(1)
                      << std::setw(12) << s.mean << " +- " << s.stddev << " images/s\n";
        }
    }
    return kOk;
}

void add_grid_flags(CLI::App* cmd, Options& o) {
    auto* r = cmd->add_option("--radius", o.radius, "Hexagon circumradius in pixels");
    auto* e = cmd->add_flag("--equal-count", o.equal_count, "Size the grid to the image's pixel count (default)");
    r->excludes(e);
    cmd->add_option("--rows", o.rows, "Hex grid rows")->excludes(r);
    cmd->add_option("--cols", o.cols, "Hex grid columns")->excludes(r);
}

void add_interp(CLI::App* cmd, Options& o) {
    cmd->add_option("--interp", o.interp, "Interpolation")
        ->check(CLI::IsMember({"nearest", "bilinear", "bicubic"}));
}

void add_threads(CLI::App* cmd, Options& o) {
    cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
}

void add_format(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hexagonal lattice image processing and hexagonal CNN toolkit"};
    app.require_subcommand(1);
    Options o;

    auto* transform = app.add_subcommand("transform", "Resample an image to a hex grid (.hexa) or back");
    transform->add_option("--input", o.input, "Input image or .hexa")->required();
    transform->add_option("--output", o.output, "Output .hexa or image")->required();
    add_grid_flags(transform, o);
    add_interp(transform, o);
    add_threads(transform, o);

    auto* render = app.add_subcommand("render", "Rasterize a hex grid to a PNG/PGM");
    render->add_option("--input", o.input, "Input .hexa or image")->required();
    render->add_option("--output", o.output, "Output image")->required();
    render->add_option("--scale", o.scale, "Output pixels per pitch")->check(CLI::PositiveNumber);
    render->add_option("--supersample", o.supersample, "Sub-samples per axis")->check(CLI::IsMember({1, 2, 4}));
    add_grid_flags(render, o);
    add_interp(render, o);
    add_threads(render, o);

    auto* metrics = app.add_subcommand("metrics", "Transformation efficiency of one image at one radius");
    metrics->add_option("--input", o.input, "Input image")->required();
    add_grid_flags(metrics, o);
    add_interp(metrics, o);
    add_format(metrics, o);

    auto* sweep = app.add_subcommand("sweep", "Sweep T_q, T_h and their difference over radii");
    sweep->add_option("--input", o.input, "Input image or directory")->required();
    sweep->add_option("--output", o.output, "Output file (default stdout)");
    sweep->add_option("--radii", o.radii, "Radii to sweep (default 0.25..4 step 0.25)")->delimiter(',');
    add_interp(sweep, o);
    add_format(sweep, o);

    auto* summary = app.add_subcommand("summary", "Print a model's layer table");
    summary->add_option("--model", o.model, "Model preset")->check(CLI::IsMember({"h-cnn", "s-cnn", "s-cnn-3x3"}));
    summary->add_option("--channels", o.channels, "Input channels")->check(CLI::PositiveNumber);
    summary->add_option("--classes", o.classes, "Output classes")->check(CLI::PositiveNumber);

    auto* train = app.add_subcommand("train", "Train a model preset on a dataset");
    auto* eval = app.add_subcommand("eval", "Evaluate saved weights on a dataset's test split");
    for (auto* cmd : {train, eval}) {
        cmd->add_option("--model", o.model, "Model preset")->check(CLI::IsMember({"h-cnn", "s-cnn", "s-cnn-3x3"}));
        cmd->add_option("--data", o.data, "IDX directory or one-subdirectory-per-class image directory")->required();
        cmd->add_option("--weights", o.weights, "HXNN weights file");
        add_interp(cmd, o);
        add_format(cmd, o);
        add_threads(cmd, o);
    }
    train->add_option("--epochs", o.epochs, "Epochs")->check(CLI::NonNegativeNumber);
    train->add_option("--batch-size", o.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
    train->add_option("--seed", o.seed, "Seed for initialization, shuffling and dropout");
    train->add_option("--output", o.weights, "Weights output (alias of --weights)");

    auto* bench = app.add_subcommand("bench", "Throughput of s2h, h2s and a square-resize baseline");
    bench->add_option("--input", o.input, "Input image or directory (default: synthetic)");
    bench->add_option("--size", o.size, "Synthetic image size")->check(CLI::PositiveNumber);
    bench->add_option("--runs", o.runs, "Timed runs")->check(CLI::PositiveNumber);
    bench->add_option("--warmup", o.warmup, "Warmup runs")->check(CLI::NonNegativeNumber);
    add_grid_flags(bench, o);
    add_interp(bench, o);
    add_threads(bench, o);
    add_format(bench, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*transform) return cmd_transform(o);
        if (*render) return cmd_render(o);
        if (*metrics) return cmd_metrics(o);
        if (*sweep) return cmd_sweep(o);
        if (*summary) return cmd_summary(o);
        if (*train) return cmd_train(o);
        if (*eval) return cmd_eval(o);
        if (*bench) return cmd_bench(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const io::FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kFormat;
    } catch (const nn::ShapeError& e) {
        std::cerr << "shape error: " << e.what() << "\n";
        return kFormat;
    } catch (const io::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kUsage;
}
