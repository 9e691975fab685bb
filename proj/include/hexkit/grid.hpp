#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace hexkit {

inline constexpr double kSqrt3 = 1.7320508075688772935;

// Axial hex coordinate. Cube form: x = q, z = r, y = -x - z.
struct HexCoord {
    int64_t q = 0;
    int64_t r = 0;

    int64_t x() const { return q; }
    int64_t y() const { return -q - r; }
    int64_t z() const { return r; }

    HexCoord operator+(const HexCoord& o) const { return {q + o.q, r + o.r}; }
    HexCoord operator-(const HexCoord& o) const { return {q - o.q, r - o.r}; }
    bool operator==(const HexCoord&) const = default;
    auto operator<=>(const HexCoord&) const = default;
};

// Axial unit steps counterclockwise from due east. Row index grows downward,
// so "north" means row - 1.
inline constexpr std::array<HexCoord, 6> kAxialDirections = {{
    {1, 0},   // E
    {1, -1},  // NE
    {0, -1},  // NW
    {-1, 0},  // W
    {-1, 1},  // SW
    {0, 1},   // SE
}};

struct Cell {
    int64_t row = 0;
    int64_t col = 0;
    bool operator==(const Cell&) const = default;
    auto operator<=>(const Cell&) const = default;
};

/// Geometry of a pseudohexagonal grid: pointy-top hexagons stored linewise,
/// odd rows shifted right by half a pitch.
class HexGridSpec {
public:
    HexGridSpec() = default;
    HexGridSpec(int64_t rows, int64_t cols, double pitch = 1.0);

    static HexGridSpec from_radius(int64_t rows, int64_t cols, double radius) {
        return HexGridSpec(rows, cols, radius * kSqrt3);
    }

    int64_t rows() const { return rows_; }
    int64_t cols() const { return cols_; }
    int64_t size() const { return rows_ * cols_; }
    double pitch() const { return pitch_; }
    double radius() const { return pitch_ / kSqrt3; }
    double row_spacing() const { return pitch_ * kSqrt3 / 2.0; }
    double hex_area() const { return 1.5 * kSqrt3 * radius() * radius(); }

    bool contains(int64_t row, int64_t col) const {
        return row >= 0 && row < rows_ && col >= 0 && col < cols_;
    }
    bool contains(const Cell& c) const { return contains(c.row, c.col); }

    // Bounding box of all hexagons, relative to the center of cell (0, 0).
    double min_x() const { return -pitch_ / 2.0; }
    double min_y() const { return -radius(); }
    double width() const {
        return (static_cast<double>(cols_) + (rows_ > 1 ? 0.5 : 0.0)) * pitch_;
    }
    double height() const {
        return static_cast<double>(rows_ - 1) * row_spacing() + 2.0 * radius();
    }

    bool operator==(const HexGridSpec&) const = default;

private:
    int64_t rows_ = 1;
    int64_t cols_ = 1;
    double pitch_ = 1.0;
};

/// Multi-channel samples on a HexGridSpec, linewise row-major with channels
/// innermost.
template <typename Scalar>
class HexArray {
public:
    using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    HexArray() = default;
    HexArray(const HexGridSpec& spec, int64_t channels, Scalar fill = Scalar(0))
        : spec_(spec), channels_(channels) {
        if (channels < 1) throw std::invalid_argument("HexArray: channels must be >= 1");
        data_ = Storage::Constant(spec.size() * channels, fill);
    }

    const HexGridSpec& spec() const { return spec_; }
    int64_t rows() const { return spec_.rows(); }
    int64_t cols() const { return spec_.cols(); }
    int64_t channels() const { return channels_; }
    bool empty() const { return data_.size() == 0; }

    int64_t index(int64_t row, int64_t col, int64_t ch = 0) const {
        return (row * spec_.cols() + col) * channels_ + ch;
    }
    Scalar& operator()(int64_t row, int64_t col, int64_t ch = 0) { return data_[index(row, col, ch)]; }
    Scalar operator()(int64_t row, int64_t col, int64_t ch = 0) const { return data_[index(row, col, ch)]; }

    Storage& data() { return data_; }
    const Storage& data() const { return data_; }

    template <typename Other>
    HexArray<Other> cast() const {
        HexArray<Other> out(spec_, channels_);
        out.data() = data_.template cast<Other>();
        return out;
    }

private:
    HexGridSpec spec_;
    int64_t channels_ = 0;
    Storage data_;
};

/// Base-7 spiral address, most significant digit first.
class SpiralAddress {
public:
    SpiralAddress() = default;
    explicit SpiralAddress(std::vector<uint8_t> digits);

    static SpiralAddress from_value(uint64_t value, std::size_t order);

    const std::vector<uint8_t>& digits() const { return digits_; }
    std::size_t order() const { return digits_.size(); }
    uint64_t value() const;

private:
    std::vector<uint8_t> digits_;
};

struct HexBlock {
    int64_t side = 0;
    std::vector<std::array<int64_t, 2>> members;  // (x, y)
    int64_t size() const { return static_cast<int64_t>(members.size()); }
};

// Closed-form hexagonal block size 3N^2 - 3N + 1.
constexpr int64_t hex_block_size(int64_t side) { return 3 * side * side - 3 * side + 1; }

bool in_hex_block(int64_t side, int64_t x, int64_t y);
HexBlock hex_block(int64_t side);

// Axial image of the spiral digit d: 0 is the origin, 1..6 the unit steps.
HexCoord spiral_digit_offset(uint8_t digit);
// Index-7 sublattice map (q, r) -> (2q - r, q + 3r).
HexCoord septree_scale(const HexCoord& c);
HexCoord spiral_to_axial(const SpiralAddress& addr);

Cell grid_anchor(const HexGridSpec& spec);
std::optional<Cell> axial_to_linewise(const HexCoord& c, const HexGridSpec& spec);
HexCoord linewise_to_axial(const Cell& cell, const HexGridSpec& spec);

// Neighbors counterclockwise from east. Cells may lie outside the grid.
std::array<Cell, 6> neighbors(int64_t row, int64_t col);
std::array<Cell, 6> neighbor_offsets(int64_t row_parity);

Eigen::Vector2d center_position(int64_t row, int64_t col, const HexGridSpec& spec);

// Unchecked variant for hot loops and for cells outside the grid.
inline Eigen::Vector2d lattice_center(int64_t row, int64_t col, double pitch) {
    const double shift = (row & 1) ? 0.5 : 0.0;
    return {(static_cast<double>(col) + shift) * pitch,
            static_cast<double>(row) * pitch * kSqrt3 / 2.0};
}

// Vertices of the pointy-top hexagon around `center`, counterclockwise in
// the (x, y) frame.
std::array<Eigen::Vector2d, 6> hexagon_vertices(const Eigen::Vector2d& center, double radius);

// Cell of the infinite lattice whose hexagon contains p (grid-relative coordinates).
Cell lattice_locate(const Eigen::Vector2d& p, double pitch);
// Cell inside the grid whose center is closest to p.
Cell nearest_cell(const Eigen::Vector2d& p, const HexGridSpec& spec);

}  // namespace hexkit
