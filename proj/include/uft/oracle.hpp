#pragma once

#include <vector>

#include "uft/measures.hpp"

namespace uft {

struct AssignmentResult {
    std::vector<int> permutation;  ///< row i is assigned to column permutation[i]
    double cost = 0.0;
};

/// Exhaustive minimum-cost assignment for square C with n <= 8 (throws
/// TooLarge otherwise). Ties break to the lexicographically smallest
/// permutation.
AssignmentResult brute_force_assignment(const CostMatrix& C);

/// Gradient of the entropic-UOT primal objective with respect to the plan:
/// g_ij = C_ij + tau log(r_i/alpha_i) + tau log(c_j/beta_j)
///      + eta (1 + log T_ij), with r = T1, c = T'1. Requires T > 0 entrywise.
Matrix uot_primal_gradient(const Matrix& T, const CostMatrix& C,
                           const MassVector& alpha, const MassVector& beta,
                           double eta, double tau);

/// Independent minimizer of the entropic-UOT primal by multiplicative
/// (exponentiated) gradient updates with step halving on objective increase.
/// Plan entries are floored at 1e-30. Limited to n_x * n_z <= 1024.
/// Throws Diverged after 50 consecutive rejected steps.
Matrix uot_projected_gradient(const CostMatrix& C, const MassVector& alpha,
                              const MassVector& beta, double eta, double tau,
                              int steps, double step_size);

}  // namespace uft
