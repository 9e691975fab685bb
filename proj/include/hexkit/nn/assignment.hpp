#pragma once

#include <vector>

#include <Eigen/Dense>

namespace hexkit::nn {

struct Assignment {
    std::vector<int> permutation;  // row i -> column permutation[i]
    double cost = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix (Hungarian method
// with potentials, O(n^3)). Among optimal matchings the lexicographically
// smallest permutation is returned.
Assignment assignment_solve(const Eigen::MatrixXd& cost);

}  // namespace hexkit::nn
