#include "hexkit/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace hexkit {

namespace {

// Keeps the part of `in` where inside(p) holds; `cross` returns the point on
// the clip boundary between two vertices on opposite sides.
template <typename Inside, typename Cross>
Polygon clip_half_plane(const Polygon& in, Inside inside, Cross cross) {
    Polygon out;
    if (in.empty()) return out;
    out.reserve(in.size() + 2);
    Eigen::Vector2d prev = in.back();
    bool prev_in = inside(prev);
    for (const auto& cur : in) {
        const bool cur_in = inside(cur);
        if (cur_in) {
            if (!prev_in) out.push_back(cross(prev, cur));
            out.push_back(cur);
        } else if (prev_in) {
            out.push_back(cross(prev, cur));
        }
        prev = cur;
        prev_in = cur_in;
    }
    return out;
}

Eigen::Vector2d cross_x(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double x) {
    const double t = (x - a.x()) / (b.x() - a.x());
    return {x, a.y() + t * (b.y() - a.y())};
}

Eigen::Vector2d cross_y(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double y) {
    const double t = (y - a.y()) / (b.y() - a.y());
    return {a.x() + t * (b.x() - a.x()), y};
}

double overlap_1d(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

template <typename CellValue>
double weighted_mse_impl(std::span<const Overlap> overlaps, const Image& ref, CellValue cell_value,
                         MseNormalizer norm) {
    double total = 0.0;
    for (int64_t ch = 0; ch < ref.channels(); ++ch) {
        double acc = 0.0;
        double weight = 0.0;
        for (const auto& o : overlaps) {
            const double d = ref(o.pixel_x, o.pixel_y, ch) - cell_value(o.cell, ch);
            acc += o.area * d * d;
            weight += o.area;
        }
        if (!(weight > 0.0)) throw UndefinedMetric("weighted_mse: lattices do not overlap");
        total += acc / (norm == MseNormalizer::TotalArea ? weight : static_cast<double>(overlaps.size()));
    }
    return total / static_cast<double>(ref.channels());
}

}  // namespace

Polygon clip_convex(const Polygon& subject, const Rect& rect) {
    if (subject.size() < 3) return {};
    Polygon p = clip_half_plane(
        subject, [&](const Eigen::Vector2d& v) { return v.x() >= rect.x0; },
        [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return cross_x(a, b, rect.x0); });
    p = clip_half_plane(
        p, [&](const Eigen::Vector2d& v) { return v.x() <= rect.x1; },
        [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return cross_x(a, b, rect.x1); });
    p = clip_half_plane(
        p, [&](const Eigen::Vector2d& v) { return v.y() >= rect.y0; },
        [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return cross_y(a, b, rect.y0); });
    p = clip_half_plane(
        p, [&](const Eigen::Vector2d& v) { return v.y() <= rect.y1; },
        [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return cross_y(a, b, rect.y1); });
    if (p.size() < 3) return {};
    return p;
}

double polygon_area(const Polygon& poly) {
    if (poly.size() < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        acc += poly[j].x() * poly[i].y() - poly[i].x() * poly[j].y();
    }
    return 0.5 * acc;
}

std::vector<Overlap> hex_overlaps(const HexGridSpec& spec, int64_t width, int64_t height) {
    std::vector<Overlap> out;
    const Eigen::Vector2d origin = grid_origin(spec, static_cast<double>(width), static_cast<double>(height));
    const double radius = spec.radius();
    const double half_pitch = spec.pitch() / 2.0;
    for (int64_t r = 0; r < spec.rows(); ++r) {
        for (int64_t c = 0; c < spec.cols(); ++c) {
            const Eigen::Vector2d center = origin + lattice_center(r, c, spec.pitch());
            const auto verts = hexagon_vertices(center, radius);
            const Polygon hexagon(verts.begin(), verts.end());
            const auto x0 = std::max<int64_t>(0, static_cast<int64_t>(std::floor(center.x() - half_pitch)));
            const auto x1 = std::min<int64_t>(width - 1, static_cast<int64_t>(std::floor(center.x() + half_pitch)));
            const auto y0 = std::max<int64_t>(0, static_cast<int64_t>(std::floor(center.y() - radius)));
            const auto y1 = std::min<int64_t>(height - 1, static_cast<int64_t>(std::floor(center.y() + radius)));
            const int64_t cell = r * spec.cols() + c;
            for (int64_t y = y0; y <= y1; ++y) {
                for (int64_t x = x0; x <= x1; ++x) {
                    const Rect pixel{static_cast<double>(x), static_cast<double>(y), static_cast<double>(x + 1),
                                     static_cast<double>(y + 1)};
                    const double a = polygon_area(clip_convex(hexagon, pixel));
                    if (a > 0.0) out.push_back({x, y, cell, a});
                }
            }
        }
    }
    return out;
}

std::vector<Overlap> square_overlaps(int64_t cols, int64_t rows, int64_t width, int64_t height) {
    std::vector<Overlap> out;
    const double sx = static_cast<double>(width) / static_cast<double>(cols);
    const double sy = static_cast<double>(height) / static_cast<double>(rows);
    for (int64_t r = 0; r < rows; ++r) {
        const double cy0 = static_cast<double>(r) * sy;
        const double cy1 = cy0 + sy;
        for (int64_t c = 0; c < cols; ++c) {
            const double cx0 = static_cast<double>(c) * sx;
            const double cx1 = cx0 + sx;
            const int64_t cell = r * cols + c;
            for (auto y = static_cast<int64_t>(std::floor(cy0)); y < std::min<int64_t>(height, std::ceil(cy1)); ++y) {
                const double hy = overlap_1d(cy0, cy1, static_cast<double>(y), static_cast<double>(y + 1));
                for (auto x = static_cast<int64_t>(std::floor(cx0)); x < std::min<int64_t>(width, std::ceil(cx1));
                     ++x) {
                    const double a = hy * overlap_1d(cx0, cx1, static_cast<double>(x), static_cast<double>(x + 1));
                    if (a > 0.0) out.push_back({x, y, cell, a});
                }
            }
        }
    }
    return out;
}

std::vector<Subarea> subareas(const Image& ref, const HexArray<double>& hex, int64_t channel) {
    const auto overlaps = hex_overlaps(hex.spec(), ref.width(), ref.height());
    std::vector<Subarea> out;
    out.reserve(overlaps.size());
    for (const auto& o : overlaps) {
        out.push_back({o.pixel_x, o.pixel_y, o.area, ref(o.pixel_x, o.pixel_y, channel),
                       hex.data()[o.cell * hex.channels() + channel]});
    }
    return out;
}

double weighted_mse(std::span<const Subarea> cells, MseNormalizer norm) {
    double acc = 0.0;
    double weight = 0.0;
    for (const auto& a : cells) {
        const double d = a.ref_value - a.transformed_value;
        acc += a.area * d * d;
        weight += a.area;
    }
    if (!(weight > 0.0)) throw UndefinedMetric("weighted_mse: lattices do not overlap");
    return acc / (norm == MseNormalizer::TotalArea ? weight : static_cast<double>(cells.size()));
}

double weighted_mse(const Image& ref, const HexArray<double>& hex, MseNormalizer norm) {
    if (hex.channels() != ref.channels()) throw std::invalid_argument("weighted_mse: channel count mismatch");
    const auto overlaps = hex_overlaps(hex.spec(), ref.width(), ref.height());
    return weighted_mse_impl(
        overlaps, ref, [&](int64_t cell, int64_t ch) { return hex.data()[cell * hex.channels() + ch]; }, norm);
}

double weighted_mse(const Image& ref, const Image& resampled, MseNormalizer norm) {
    if (resampled.channels() != ref.channels()) throw std::invalid_argument("weighted_mse: channel count mismatch");
    const auto overlaps = square_overlaps(resampled.width(), resampled.height(), ref.width(), ref.height());
    return weighted_mse_impl(
        overlaps, ref, [&](int64_t cell, int64_t ch) { return resampled.data()[cell * resampled.channels() + ch]; },
        norm);
}

double psnr(double mse, double max_i) {
    if (mse < 0.0 || std::isnan(mse)) throw std::invalid_argument("psnr: mse must be >= 0");
    if (!(max_i > 0.0)) throw std::invalid_argument("psnr: max_i must be > 0");
    if (mse == 0.0) return kInfinity;
    return 10.0 * std::log10(max_i * max_i / mse);
}

EfficiencyReport efficiency_at(const Image& img, double radius, const SweepOptions& opts) {
    EfficiencyReport rep;
    rep.radius = radius;
    rep.max_i = opts.max_i;
    if (!(radius > 0.0)) throw std::invalid_argument("efficiency_sweep: radius must be > 0");
    const auto spec = grid_for_radius(img.width(), img.height(), radius);
    if (!spec) {
        rep.skipped = true;
        rep.warning = "radius too large: hex grid would be empty";
        return rep;
    }
    rep.hex_rows = spec->rows();
    rep.hex_cols = spec->cols();

    const auto hex = s2h(img, *spec, opts.mode);
    rep.mse_h = weighted_mse(img, hex, opts.normalizer);

    // The square transform uses the Hexarray resolution as its target size.
    const auto square = resize(img, spec->cols(), spec->rows(), opts.mode);
    rep.mse_q = weighted_mse(img, square, opts.normalizer);

    rep.t_h = psnr(rep.mse_h, opts.max_i);
    rep.t_q = psnr(rep.mse_q, opts.max_i);
    rep.delta = (std::isinf(rep.t_h) && std::isinf(rep.t_q)) ? 0.0 : rep.t_h - rep.t_q;
    return rep;
}

std::vector<EfficiencyReport> efficiency_sweep(const Image& img, std::span<const double> radii,
                                               const SweepOptions& opts) {
    if (img.empty()) throw std::invalid_argument("efficiency_sweep: empty image");
    std::vector<EfficiencyReport> out;
    out.reserve(radii.size());
    for (double r : radii) out.push_back(efficiency_at(img, r, opts));
    return out;
}

}  // namespace hexkit
