#include "hexkit/io/dataset.hpp"

#include <algorithm>

#include "hexkit/io/errors.hpp"
#include "hexkit/io/image_io.hpp"

namespace hexkit::io {

namespace fs = std::filesystem;

bool hashed_test_split(const std::string& name) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h % 5 == 0;
}

namespace {

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool want_dirs) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (want_dirs ? e.is_directory() : (e.is_regular_file() && is_image_file(e.path()))) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void ingest_classes(const fs::path& root, const fs::path& base, LabeledDataset& ds, int split) {
    for (const auto& class_dir : sorted_entries(root, true)) {
        const std::string cls = class_dir.filename().string();
        auto it = std::find(ds.classes.begin(), ds.classes.end(), cls);
        if (it == ds.classes.end()) {
            ds.classes.push_back(cls);
            it = ds.classes.end() - 1;
        }
        const int label = static_cast<int>(it - ds.classes.begin());
        for (const auto& file : sorted_entries(class_dir, false)) {
            const std::string name = fs::relative(file, base).generic_string();
            ds.images.push_back(read_image(file));
            ds.labels.push_back(label);
            ds.names.push_back(name);
            ds.is_test.push_back(split < 0 ? hashed_test_split(name) : split == 1);
        }
    }
}

}  // namespace

LabeledDataset ingest_image_dir(const fs::path& root) {
    if (!fs::is_directory(root)) throw IoError("dataset directory '" + root.string() + "' does not exist");
    LabeledDataset ds;
    if (fs::is_directory(root / "train") && fs::is_directory(root / "test")) {
        ingest_classes(root / "train", root, ds, 0);
        ingest_classes(root / "test", root, ds, 1);
    } else {
        ingest_classes(root, root, ds, -1);
    }
    if (ds.images.empty()) throw IoError("dataset directory '" + root.string() + "' holds no images");
    return ds;
}

LabeledDataset from_mnist(const LabeledImages& mnist, bool test_split) {
    LabeledDataset ds;
    for (int d = 0; d < 10; ++d) ds.classes.push_back(std::to_string(d));
    for (std::size_t i = 0; i < mnist.images.size(); ++i) {
        ds.images.push_back(mnist.images[i].cast<double>());
        ds.labels.push_back(mnist.labels[i]);
        ds.names.push_back(std::to_string(i));
        ds.is_test.push_back(test_split);
    }
    return ds;
}

bool is_hexagonal(const nn::ModelSpec& model) {
    return std::any_of(model.layers.begin(), model.layers.end(), [](const nn::LayerSpec& l) {
        return l.kind == nn::LayerKind::HexConv || l.kind == nn::LayerKind::HexMaxPool;
    });
}

nn::Samples to_samples(const std::vector<Image>& images, const std::vector<int>& labels, const nn::ModelSpec& model,
                       InterpMode mode, int threads) {
    if (images.size() != labels.size()) throw std::invalid_argument("to_samples: image/label count mismatch");
    nn::Samples out;
    out.inputs = nn::Tensor(static_cast<int64_t>(images.size()), model.input_rows, model.input_cols,
                            model.input_channels);
    out.labels = labels;
    const bool hex = is_hexagonal(model);
    const int64_t stride = out.inputs.shape().sample_size();
    for (std::size_t n = 0; n < images.size(); ++n) {
        const Image& img = images[n];
        if (img.channels() != model.input_channels) {
            throw std::invalid_argument("to_samples: image has " + std::to_string(img.channels()) +
                                        " channels, model expects " + std::to_string(model.input_channels));
        }
        Eigen::ArrayXd values;
        if (hex) {
            const double span = static_cast<double>(model.input_cols) + (model.input_rows > 1 ? 0.5 : 0.0);
            const HexGridSpec spec(model.input_rows, model.input_cols, static_cast<double>(img.width()) / span);
            values = s2h(img, spec, mode, threads).data();
        } else {
            values = resize(img, model.input_cols, model.input_rows, mode, threads).data();
        }
        out.inputs.data().segment(static_cast<int64_t>(n) * stride, stride) = values / 255.0;
    }
    return out;
}

}  // namespace hexkit::io
