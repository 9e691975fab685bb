#include "hexkit/nn/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hexkit::nn {

namespace {

// Shortest augmenting path Hungarian algorithm; returns column -> row
// matching for rows/cols given as index lists into `cost`.
double hungarian(const Eigen::MatrixXd& cost, const std::vector<int>& rows, const std::vector<int>& cols,
                 std::vector<int>* match_row_to_col) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) {
        if (match_row_to_col) match_row_to_col->clear();
        return 0.0;
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    auto a = [&](int i, int j) { return cost(rows[i - 1], cols[j - 1]); };

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cost(rows[i], cols[row_to_col[i]]);
    if (match_row_to_col) *match_row_to_col = std::move(row_to_col);
    return total;
}

}  // namespace

Assignment assignment_solve(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols()) throw std::invalid_argument("assignment_solve: cost matrix must be square");
    if (!cost.allFinite()) throw std::invalid_argument("assignment_solve: cost entries must be finite");
    const int n = static_cast<int>(cost.rows());
    if (n == 0) return {};
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    const double best = hungarian(cost, all, all, nullptr);
    const double tol = 1e-9 * std::max(1.0, cost.cwiseAbs().maxCoeff() * n);

    // Fix rows in order to the smallest column that keeps the optimum.
    Assignment out;
    out.permutation.assign(n, -1);
    std::vector<int> free_cols = all;
    double fixed = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<int> rest_rows;
        for (int r = i + 1; r < n; ++r) rest_rows.push_back(r);
        bool placed = false;
        for (std::size_t k = 0; k < free_cols.size() && !placed; ++k) {
            const int j = free_cols[k];
            std::vector<int> rest_cols = free_cols;
            rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(k));
            const double total = fixed + cost(i, j) + hungarian(cost, rest_rows, rest_cols, nullptr);
            if (total <= best + tol) {
                out.permutation[i] = j;
                fixed += cost(i, j);
                free_cols = std::move(rest_cols);
                placed = true;
            }
        }
        if (!placed) throw std::logic_error("assignment_solve: tie-break lost the optimum");
    }
    out.cost = fixed;
    return out;
}

}  // namespace hexkit::nn
