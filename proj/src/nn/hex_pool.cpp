#include "hexkit/nn/hex_pool.hpp"

#include "hexkit/nn/assignment.hpp"

namespace hexkit::nn {

namespace {

Eigen::Vector2d axial_to_cartesian(const HexCoord& c) {
    return {static_cast<double>(c.q) + static_cast<double>(c.r) / 2.0, static_cast<double>(c.r) * kSqrt3 / 2.0};
}

std::vector<Cell> window_candidates() {
    std::vector<Cell> out;
    for (int64_t dr = -1; dr <= 1; ++dr) {
        for (int64_t dc = -1; dc <= 1; ++dc) out.push_back({dr, dc});
    }
    return out;
}

}  // namespace

Eigen::MatrixXd pool_cost_matrix(int64_t parity, double scale) {
    const auto candidates = window_candidates();
    const int64_t row0 = parity & 1;
    const Eigen::Vector2d origin = lattice_center(row0, 0, 1.0);
    Eigen::MatrixXd cost(7, static_cast<Eigen::Index>(candidates.size()));
    for (uint8_t d = 0; d < 7; ++d) {
        const Eigen::Vector2d ideal = scale * axial_to_cartesian(spiral_to_axial(SpiralAddress({d})));
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            const Eigen::Vector2d pos = lattice_center(row0 + candidates[j].row, candidates[j].col, 1.0) - origin;
            cost(d, static_cast<Eigen::Index>(j)) = (ideal - pos).squaredNorm();
        }
    }
    return cost;
}

PoolingAssignment pool_assignment(int64_t parity, double scale) {
    PoolingAssignment out;
    out.parity = parity & 1;
    out.candidates = window_candidates();
    const int64_t row0 = out.parity;
    const Eigen::Vector2d origin = lattice_center(row0, 0, 1.0);
    for (const auto& c : out.candidates) out.candidate_positions.push_back(lattice_center(row0 + c.row, c.col, 1.0) - origin);
    for (uint8_t d = 0; d < 7; ++d) out.ideal[d] = scale * axial_to_cartesian(spiral_to_axial(SpiralAddress({d})));

    // |O_n| = |O_{n-1}|: two zero-cost dummy ideals absorb the unused corners.
    const Eigen::MatrixXd partial = pool_cost_matrix(parity, scale);
    const auto m = static_cast<Eigen::Index>(out.candidates.size());
    Eigen::MatrixXd square = Eigen::MatrixXd::Zero(m, m);
    square.topRows(7) = partial;
    const Assignment a = assignment_solve(square);
    for (int i = 0; i < 7; ++i) out.chosen[static_cast<std::size_t>(i)] = a.permutation[static_cast<std::size_t>(i)];
    out.cost = a.cost;
    return out;
}

const std::array<Cell, 7>& pool_offsets(int64_t parity) {
    static const auto table = [] {
        std::array<std::array<Cell, 7>, 2> t{};
        for (int64_t p = 0; p < 2; ++p) {
            const auto a = pool_assignment(p);
            for (std::size_t i = 0; i < 7; ++i) t[static_cast<std::size_t>(p)][i] = a.candidates[static_cast<std::size_t>(a.chosen[i])];
        }
        return t;
    }();
    return table[static_cast<std::size_t>(parity & 1)];
}

}  // namespace hexkit::nn
