#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "hexkit/grid.hpp"
#include "hexkit/image.hpp"
#include "hexkit/nn/tensor.hpp"
#include "hexkit/transform.hpp"

namespace testsupport {

using hexkit::Image;

inline Image random_image(int64_t w, int64_t h, std::mt19937_64& rng, int64_t channels = 1) {
    std::uniform_real_distribution<double> u(0.0, 255.0);
    Image img(w, h, channels);
    for (int64_t i = 0; i < img.data().size(); ++i) img.data()[i] = std::round(u(rng));
    return img;
}

inline hexkit::nn::Tensor4<double> random_tensor(const hexkit::nn::Shape4& s, std::mt19937_64& rng,
                                                 double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    hexkit::nn::Tensor4<double> t(s);
    for (int64_t i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
    return t;
}

// Area-weighted MSE by point sampling: the image is rasterized at `sub` times
// its resolution per axis and every sample is compared against the hexagon
// that contains it.
inline double supersampled_mse(const Image& ref, const hexkit::HexArray<double>& hex, int sub = 64) {
    const auto& spec = hex.spec();
    const Eigen::Vector2d origin =
        hexkit::grid_origin(spec, static_cast<double>(ref.width()), static_cast<double>(ref.height()));
    double acc = 0.0;
    int64_t hits = 0;
    for (int64_t y = 0; y < ref.height(); ++y) {
        for (int64_t x = 0; x < ref.width(); ++x) {
            for (int sy = 0; sy < sub; ++sy) {
                for (int sx = 0; sx < sub; ++sx) {
                    const Eigen::Vector2d p(x + (sx + 0.5) / sub, y + (sy + 0.5) / sub);
                    const hexkit::Cell c = hexkit::lattice_locate(p - origin, spec.pitch());
                    if (!spec.contains(c)) continue;
                    const double d = ref(x, y, 0) - hex(c.row, c.col, 0);
                    acc += d * d;
                    ++hits;
                }
            }
        }
    }
    return acc / static_cast<double>(hits);
}

// Central finite difference of f with respect to *value.
inline double numeric_derivative(const std::function<double()>& f, double& value, double h = 1e-5) {
    const double saved = value;
    value = saved + h;
    const double up = f();
    value = saved - h;
    const double down = f();
    value = saved;
    return (up - down) / (2.0 * h);
}

inline bool gradient_close(double analytic, double numeric, double rel = 1e-4, double abs_floor = 1e-6) {
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1.0});
    return std::abs(analytic - numeric) <= std::max(rel * scale, abs_floor);
}

}  // namespace testsupport
