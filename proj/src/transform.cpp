#include "hexkit/transform.hpp"

namespace hexkit {

InterpMode parse_interp(std::string_view name) {
    if (name == "nearest") return InterpMode::Nearest;
    if (name == "bilinear") return InterpMode::Bilinear;
    if (name == "bicubic") return InterpMode::Bicubic;
    throw std::invalid_argument("unknown interpolation mode '" + std::string(name) + "'");
}

std::string_view to_string(InterpMode mode) {
    switch (mode) {
        case InterpMode::Nearest: return "nearest";
        case InterpMode::Bilinear: return "bilinear";
        case InterpMode::Bicubic: return "bicubic";
    }
    return "?";
}

HexGridSpec choose_grid(int64_t width, int64_t height) {
    if (width < 1 || height < 1) throw std::invalid_argument("choose_grid: image must be non-empty");
    // A hexagon of pitch p covers p * p * sqrt(3) / 2, so stretching rows by
    // sqrt(2 / sqrt(3)) and shrinking columns by sqrt(sqrt(3) / 2) keeps the
    // sample count equal to the pixel count.
    const auto rows = std::max<int64_t>(1, std::llround(static_cast<double>(height) * std::sqrt(2.0 / kSqrt3)));
    const auto cols = std::max<int64_t>(1, std::llround(static_cast<double>(width) * std::sqrt(kSqrt3 / 2.0)));
    const double span = static_cast<double>(cols) + (rows > 1 ? 0.5 : 0.0);
    return HexGridSpec(rows, cols, static_cast<double>(width) / span);
}

std::optional<HexGridSpec> grid_for_radius(int64_t width, int64_t height, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("grid_for_radius: radius must be > 0");
    const double pitch = radius * kSqrt3;
    const auto rows = std::llround(static_cast<double>(height) / (1.5 * radius));
    const auto cols = std::llround(static_cast<double>(width) / pitch);
    if (rows < 1 || cols < 1) return std::nullopt;
    return HexGridSpec(rows, cols, pitch);
}

Eigen::Vector2d grid_origin(const HexGridSpec& spec, double width, double height) {
    const Eigen::Vector2d box_center(spec.min_x() + spec.width() / 2.0, spec.min_y() + spec.height() / 2.0);
    return Eigen::Vector2d(width / 2.0, height / 2.0) - box_center;
}

namespace detail {

HexWeights barycentric_weights(const Eigen::Vector2d& p, const HexGridSpec& spec) {
    const double pitch = spec.pitch();
    const int64_t cols = spec.cols();
    auto col_clamp = [cols](int64_t c) { return std::clamp<int64_t>(c, 0, cols - 1); };

    if (spec.rows() == 1) {
        const double u = std::clamp(p.x() / pitch, 0.0, static_cast<double>(cols - 1));
        const auto i = std::min<int64_t>(static_cast<int64_t>(std::floor(u)), std::max<int64_t>(cols - 2, 0));
        const double f = u - static_cast<double>(i);
        return {{Cell{0, i}, Cell{0, col_clamp(i + 1)}, Cell{0, i}}, {1.0 - f, f, 0.0}};
    }

    const double t_full = p.y() / spec.row_spacing();
    const auto r0 = std::clamp<int64_t>(static_cast<int64_t>(std::floor(t_full)), 0, spec.rows() - 2);
    const double t = std::clamp(t_full - static_cast<double>(r0), 0.0, 1.0);
    const double a = (r0 & 1) ? 0.5 : 0.0;
    const double b = ((r0 + 1) & 1) ? 0.5 : 0.0;

    // Shear so that both rows sit on integer u; the triangulation becomes a
    // unit square grid split along one diagonal.
    const double u = std::clamp(p.x() / pitch - a - t * (b - a), 0.0, static_cast<double>(cols - 1));
    const auto i = std::min<int64_t>(static_cast<int64_t>(std::floor(u)), std::max<int64_t>(cols - 2, 0));
    const double f = u - static_cast<double>(i);
    const int64_t rb = r0 + 1;
    const Cell a0{r0, i}, a1{r0, col_clamp(i + 1)}, b0{rb, i}, b1{rb, col_clamp(i + 1)};

    if (b > a) {
        if (f + t <= 1.0) return {{a0, a1, b0}, {1.0 - f - t, f, t}};
        return {{a1, b0, b1}, {1.0 - t, 1.0 - f, f + t - 1.0}};
    }
    if (f >= t) return {{a0, a1, b1}, {1.0 - f, f - t, t}};
    return {{a0, b0, b1}, {1.0 - t, t - f, f}};
}

}  // namespace detail

}  // namespace hexkit
