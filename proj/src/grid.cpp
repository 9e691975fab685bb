#include "hexkit/grid.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace hexkit {

namespace {

int64_t floor_div2(int64_t v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

}  // namespace

HexGridSpec::HexGridSpec(int64_t rows, int64_t cols, double pitch)
    : rows_(rows), cols_(cols), pitch_(pitch) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("HexGridSpec: rows and cols must be >= 1");
    if (!(pitch > 0.0) || !std::isfinite(pitch)) throw std::invalid_argument("HexGridSpec: pitch must be > 0");
}

SpiralAddress::SpiralAddress(std::vector<uint8_t> digits) : digits_(std::move(digits)) {
    for (uint8_t d : digits_) {
        if (d > 6) throw std::invalid_argument("invalid spiral address digit " + std::to_string(d));
    }
}

SpiralAddress SpiralAddress::from_value(uint64_t value, std::size_t order) {
    std::vector<uint8_t> digits(order, 0);
    for (std::size_t i = order; i-- > 0;) {
        digits[i] = static_cast<uint8_t>(value % 7);
        value /= 7;
    }
    if (value != 0) throw std::invalid_argument("spiral value does not fit the requested order");
    return SpiralAddress(std::move(digits));
}

uint64_t SpiralAddress::value() const {
    uint64_t v = 0;
    for (uint8_t d : digits_) v = v * 7 + d;
    return v;
}

bool in_hex_block(int64_t side, int64_t x, int64_t y) {
    const int64_t extent = 2 * side - 1;
    return x >= 0 && x < extent && y >= 0 && y < extent && std::abs(x - y) < side;
}

HexBlock hex_block(int64_t side) {
    if (side < 1) throw std::invalid_argument("hex_block: side length must be >= 1");
    HexBlock block;
    block.side = side;
    const int64_t extent = 2 * side - 1;
    block.members.reserve(static_cast<std::size_t>(hex_block_size(side)));
    for (int64_t y = 0; y < extent; ++y) {
        for (int64_t x = 0; x < extent; ++x) {
            if (in_hex_block(side, x, y)) block.members.push_back({x, y});
        }
    }
    return block;
}

HexCoord spiral_digit_offset(uint8_t digit) {
    if (digit > 6) throw std::invalid_argument("invalid spiral address digit " + std::to_string(digit));
    if (digit == 0) return {0, 0};
    return kAxialDirections[digit - 1];
}

HexCoord septree_scale(const HexCoord& c) { return {2 * c.q - c.r, c.q + 3 * c.r}; }

HexCoord spiral_to_axial(const SpiralAddress& addr) {
    // Horner form of sum_k T^(n-1-k) D(d_k).
    HexCoord acc{0, 0};
    for (uint8_t d : addr.digits()) acc = septree_scale(acc) + spiral_digit_offset(d);
    return acc;
}

Cell grid_anchor(const HexGridSpec& spec) { return {spec.rows() / 2, spec.cols() / 2}; }

std::optional<Cell> axial_to_linewise(const HexCoord& c, const HexGridSpec& spec) {
    // Translate in axial space so the shift is a lattice translation for
    // both anchor row parities.
    const Cell anchor = grid_anchor(spec);
    const HexCoord a = c + HexCoord{anchor.col - floor_div2(anchor.row), anchor.row};
    const Cell cell{a.r, a.q + floor_div2(a.r)};
    if (!spec.contains(cell)) return std::nullopt;
    return cell;
}

HexCoord linewise_to_axial(const Cell& cell, const HexGridSpec& spec) {
    const Cell anchor = grid_anchor(spec);
    const HexCoord raw{cell.col - floor_div2(cell.row), cell.row};
    const HexCoord origin{anchor.col - floor_div2(anchor.row), anchor.row};
    return raw - origin;
}

std::array<Cell, 6> neighbor_offsets(int64_t row_parity) {
    if (row_parity & 1) {
        return {{{0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, 0}, {1, 1}}};
    }
    return {{{0, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}}};
}

std::array<Cell, 6> neighbors(int64_t row, int64_t col) {
    auto out = neighbor_offsets(row & 1);
    for (auto& c : out) {
        c.row += row;
        c.col += col;
    }
    return out;
}

Eigen::Vector2d center_position(int64_t row, int64_t col, const HexGridSpec& spec) {
    if (!spec.contains(row, col)) throw std::invalid_argument("center_position: cell outside grid");
    return lattice_center(row, col, spec.pitch());
}

std::array<Eigen::Vector2d, 6> hexagon_vertices(const Eigen::Vector2d& center, double radius) {
    const double hx = radius * kSqrt3 / 2.0;
    const double hy = radius / 2.0;
    return {{
        center + Eigen::Vector2d(hx, hy),
        center + Eigen::Vector2d(0.0, radius),
        center + Eigen::Vector2d(-hx, hy),
        center + Eigen::Vector2d(-hx, -hy),
        center + Eigen::Vector2d(0.0, -radius),
        center + Eigen::Vector2d(hx, -hy),
    }};
}

Cell lattice_locate(const Eigen::Vector2d& p, double pitch) {
    const double h = pitch * kSqrt3 / 2.0;
    const auto r0 = static_cast<int64_t>(std::floor(p.y() / h));
    Cell best{};
    double best_d = std::numeric_limits<double>::infinity();
    for (int64_t r = r0; r <= r0 + 1; ++r) {
        const double shift = (r & 1) ? 0.5 : 0.0;
        const auto c = static_cast<int64_t>(std::floor(p.x() / pitch - shift + 0.5));
        const double d = (lattice_center(r, c, pitch) - p).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = {r, c};
        }
    }
    return best;
}

Cell nearest_cell(const Eigen::Vector2d& p, const HexGridSpec& spec) {
    const double h = spec.row_spacing();
    const double pitch = spec.pitch();
    const double fr = std::clamp(std::floor(p.y() / h), -1.0, static_cast<double>(spec.rows()));
    const auto r0 = static_cast<int64_t>(fr);
    Cell best{};
    double best_d = std::numeric_limits<double>::infinity();
    for (int64_t r = std::max<int64_t>(0, r0 - 1); r <= std::min(spec.rows() - 1, r0 + 2); ++r) {
        const double shift = (r & 1) ? 0.5 : 0.0;
        const double fc = std::clamp(std::floor(p.x() / pitch - shift + 0.5), 0.0,
                                     static_cast<double>(spec.cols() - 1));
        const auto c = static_cast<int64_t>(fc);
        const double d = (lattice_center(r, c, pitch) - p).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = {r, c};
        }
    }
    return best;
}

}  // namespace hexkit
