#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hexkit/grid.hpp"
#include "hexkit/image.hpp"
#include "hexkit/parallel.hpp"

namespace hexkit {

enum class InterpMode { Nearest, Bilinear, Bicubic };

InterpMode parse_interp(std::string_view name);
std::string_view to_string(InterpMode mode);

// Equal-sample-count hex grid for a width x height image; the grid's
// bounding box spans the image width.
HexGridSpec choose_grid(int64_t width, int64_t height);

// Grid with the given circumradius whose sample density matches its hexagon
// area. Empty when the image is too small for a single row or column.
std::optional<HexGridSpec> grid_for_radius(int64_t width, int64_t height, double radius);

// Image-space position of the center of cell (0, 0) when the grid's bounding
// box is centered on a width x height image.
Eigen::Vector2d grid_origin(const HexGridSpec& spec, double width, double height);

namespace detail {

inline double catmull_rom(double t) {
    t = std::abs(t);
    if (t < 1.0) return 1.5 * t * t * t - 2.5 * t * t + 1.0;
    if (t < 2.0) return -0.5 * t * t * t + 2.5 * t * t - 4.0 * t + 2.0;
    return 0.0;
}

inline int64_t clamp_index(int64_t i, int64_t n) { return std::clamp<int64_t>(i, 0, n - 1); }

}  // namespace detail

/// Interpolated value of `img` at continuous image coordinates (u, v), with
/// clamp-to-edge outside the raster. Pixel centers sit at half-integers.
template <typename Scalar>
double sample(const SquareImage<Scalar>& img, double u, double v, int64_t ch, InterpMode mode) {
    const int64_t w = img.width();
    const int64_t h = img.height();
    switch (mode) {
        case InterpMode::Nearest: {
            const int64_t x = detail::clamp_index(static_cast<int64_t>(std::floor(u)), w);
            const int64_t y = detail::clamp_index(static_cast<int64_t>(std::floor(v)), h);
            return static_cast<double>(img(x, y, ch));
        }
        case InterpMode::Bilinear: {
            const double fx = u - 0.5;
            const double fy = v - 0.5;
            const double x0f = std::floor(fx);
            const double y0f = std::floor(fy);
            const double tx = fx - x0f;
            const double ty = fy - y0f;
            const auto x0 = static_cast<int64_t>(x0f);
            const auto y0 = static_cast<int64_t>(y0f);
            const int64_t xa = detail::clamp_index(x0, w), xb = detail::clamp_index(x0 + 1, w);
            const int64_t ya = detail::clamp_index(y0, h), yb = detail::clamp_index(y0 + 1, h);
            // Difference form keeps constants exact.
            const double a = img(xa, ya, ch), b = img(xb, ya, ch);
            const double c = img(xa, yb, ch), d = img(xb, yb, ch);
            const double top = a + tx * (b - a);
            const double bottom = c + tx * (d - c);
            return top + ty * (bottom - top);
        }
        case InterpMode::Bicubic: {
            const double fx = u - 0.5;
            const double fy = v - 0.5;
            const double x0f = std::floor(fx);
            const double y0f = std::floor(fy);
            const auto x0 = static_cast<int64_t>(x0f);
            const auto y0 = static_cast<int64_t>(y0f);
            std::array<double, 4> wx{}, wy{};
            for (int k = 0; k < 4; ++k) {
                wx[k] = detail::catmull_rom(fx - (x0f + k - 1));
                wy[k] = detail::catmull_rom(fy - (y0f + k - 1));
            }
            // Offsets from a reference sample keep constants exact.
            const double ref = img(detail::clamp_index(x0, w), detail::clamp_index(y0, h), ch);
            double acc = ref;
            for (int j = 0; j < 4; ++j) {
                const int64_t y = detail::clamp_index(y0 + j - 1, h);
                double row = 0.0;
                for (int i = 0; i < 4; ++i) row += wx[i] * (img(detail::clamp_index(x0 + i - 1, w), y, ch) - ref);
                acc += wy[j] * row;
            }
            return acc;
        }
    }
    return 0.0;
}

inline double clamp_sample(double v) { return std::clamp(v, 0.0, 255.0); }

/// Square image to hex grid: the grid is centered on the image and each
/// Hexint takes the interpolated value at its center.
template <typename Scalar>
HexArray<Scalar> s2h(const SquareImage<Scalar>& img, const HexGridSpec& spec, InterpMode mode, int threads = 1) {
    if (img.empty()) throw std::invalid_argument("s2h: empty image");
    HexArray<Scalar> out(spec, img.channels());
    const Eigen::Vector2d origin =
        grid_origin(spec, static_cast<double>(img.width()), static_cast<double>(img.height()));
    const int64_t channels = img.channels();
    parallel_for(spec.rows(), threads, [&](int64_t r0, int64_t r1) {
        for (int64_t r = r0; r < r1; ++r) {
            for (int64_t c = 0; c < spec.cols(); ++c) {
                const Eigen::Vector2d p = origin + lattice_center(r, c, spec.pitch());
                for (int64_t ch = 0; ch < channels; ++ch) {
                    out(r, c, ch) = static_cast<Scalar>(clamp_sample(sample(img, p.x(), p.y(), ch, mode)));
                }
            }
        }
    });
    return out;
}

/// Square-lattice resize sampling at target pixel centers; the square
/// baseline for benchmarking and the square efficiency measurement.
template <typename Scalar>
SquareImage<Scalar> resize(const SquareImage<Scalar>& img, int64_t width, int64_t height, InterpMode mode,
                           int threads = 1) {
    if (img.empty()) throw std::invalid_argument("resize: empty image");
    if (width < 1 || height < 1) throw std::invalid_argument("resize: target size must be >= 1");
    SquareImage<Scalar> out(width, height, img.channels());
    const double sx = static_cast<double>(img.width()) / static_cast<double>(width);
    const double sy = static_cast<double>(img.height()) / static_cast<double>(height);
    parallel_for(height, threads, [&](int64_t y0, int64_t y1) {
        for (int64_t y = y0; y < y1; ++y) {
            const double v = (static_cast<double>(y) + 0.5) * sy;
            for (int64_t x = 0; x < width; ++x) {
                const double u = (static_cast<double>(x) + 0.5) * sx;
                for (int64_t ch = 0; ch < img.channels(); ++ch) {
                    out(x, y, ch) = static_cast<Scalar>(clamp_sample(sample(img, u, v, ch, mode)));
                }
            }
        }
    });
    return out;
}

namespace detail {

struct HexWeights {
    std::array<Cell, 3> cells;
    std::array<double, 3> weights;
};

// Barycentric weights of grid-relative point p on the triangulation of hex
// centers, clamped to the grid.
HexWeights barycentric_weights(const Eigen::Vector2d& p, const HexGridSpec& spec);

}  // namespace detail

/// Hex grid back to a width x height square image. Nearest picks the hexagon
/// containing the pixel center; bilinear interpolates barycentrically on the
/// triangles between hex centers. Bicubic is treated as bilinear.
template <typename Scalar>
SquareImage<Scalar> h2s(const HexArray<Scalar>& hex, int64_t width, int64_t height, InterpMode mode,
                        int threads = 1) {
    if (hex.empty()) throw std::invalid_argument("h2s: empty HexArray");
    if (width < 1 || height < 1) throw std::invalid_argument("h2s: target size must be >= 1");
    const HexGridSpec& spec = hex.spec();
    SquareImage<Scalar> out(width, height, hex.channels());
    const Eigen::Vector2d origin = grid_origin(spec, static_cast<double>(width), static_cast<double>(height));
    parallel_for(height, threads, [&](int64_t y0, int64_t y1) {
        for (int64_t y = y0; y < y1; ++y) {
            for (int64_t x = 0; x < width; ++x) {
                const Eigen::Vector2d p =
                    Eigen::Vector2d(static_cast<double>(x) + 0.5, static_cast<double>(y) + 0.5) - origin;
                if (mode == InterpMode::Nearest) {
                    const Cell c = nearest_cell(p, spec);
                    for (int64_t ch = 0; ch < hex.channels(); ++ch) out(x, y, ch) = hex(c.row, c.col, ch);
                } else {
                    const auto hw = detail::barycentric_weights(p, spec);
                    for (int64_t ch = 0; ch < hex.channels(); ++ch) {
                        const double v0 = hex(hw.cells[0].row, hw.cells[0].col, ch);
                        double v = v0;
                        for (int k = 1; k < 3; ++k) v += hw.weights[k] * (hex(hw.cells[k].row, hw.cells[k].col, ch) - v0);
                        out(x, y, ch) = static_cast<Scalar>(clamp_sample(v));
                    }
                }
            }
        }
    });
    return out;
}

}  // namespace hexkit
