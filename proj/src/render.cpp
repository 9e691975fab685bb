#include "hexkit/render.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hexkit/parallel.hpp"

namespace hexkit {

Image rasterize(const HexArray<double>& hex, const RenderOptions& opts) {
    if (hex.empty()) throw std::invalid_argument("rasterize: empty HexArray");
    if (!(opts.scale > 0.0)) throw std::invalid_argument("rasterize: scale must be > 0");
    if (opts.supersample != 1 && opts.supersample != 2 && opts.supersample != 4) {
        throw std::invalid_argument("rasterize: supersample must be 1, 2 or 4");
    }
    const HexGridSpec& spec = hex.spec();
    // Work in units of pitch so `scale` is pixels per pitch.
    const double units = spec.pitch();
    const auto width = static_cast<int64_t>(std::ceil(spec.width() / units * opts.scale - 1e-9));
    const auto height = static_cast<int64_t>(std::ceil(spec.height() / units * opts.scale - 1e-9));
    if (width < 1 || height < 1) throw std::invalid_argument("rasterize: zero-size canvas");

    Image out(width, height, hex.channels(), opts.background);
    const int ss = opts.supersample;
    const double step = units / opts.scale;
    const double inv = 1.0 / static_cast<double>(ss * ss);
    parallel_for(height, opts.threads, [&](int64_t y0, int64_t y1) {
        std::vector<double> acc(static_cast<std::size_t>(hex.channels()));
        for (int64_t y = y0; y < y1; ++y) {
            for (int64_t x = 0; x < width; ++x) {
                std::fill(acc.begin(), acc.end(), 0.0);
                for (int sy = 0; sy < ss; ++sy) {
                    for (int sx = 0; sx < ss; ++sx) {
                        const Eigen::Vector2d p(
                            spec.min_x() + (static_cast<double>(x) + (sx + 0.5) / ss) * step,
                            spec.min_y() + (static_cast<double>(y) + (sy + 0.5) / ss) * step);
                        const Cell c = lattice_locate(p, spec.pitch());
                        const bool inside = spec.contains(c);
                        for (int64_t ch = 0; ch < hex.channels(); ++ch) {
                            acc[static_cast<std::size_t>(ch)] += inside ? hex(c.row, c.col, ch) : opts.background;
                        }
                    }
                }
                for (int64_t ch = 0; ch < hex.channels(); ++ch) {
                    out(x, y, ch) = ss == 1 ? acc[static_cast<std::size_t>(ch)] : acc[static_cast<std::size_t>(ch)] * inv;
                }
            }
        }
    });
    return out;
}

}  // namespace hexkit
