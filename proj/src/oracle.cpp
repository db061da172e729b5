#include "uft/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uft/sinkhorn.hpp"

namespace uft {

AssignmentResult brute_force_assignment(const CostMatrix& C) {
    if (C.rows() != C.cols()) {
        throw DimensionMismatch("assignment needs a square cost matrix");
    }
    const int n = static_cast<int>(C.rows());
    if (n > 8) {
        throw TooLarge("brute-force assignment limited to n <= 8");
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    AssignmentResult best;
    best.cost = std::numeric_limits<double>::infinity();
    // next_permutation walks lexicographically, so strict < keeps the
    // lexicographically smallest minimizer on ties
    do {
        double cost = 0.0;
        for (int i = 0; i < n; ++i) cost += C.cost(i, perm[i]);
        if (cost < best.cost) {
            best.cost = cost;
            best.permutation = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Matrix uot_primal_gradient(const Matrix& T, const CostMatrix& C,
                           const MassVector& alpha, const MassVector& beta,
                           double eta, double tau) {
    if (T.rows() != C.rows() || T.cols() != C.cols()) {
        throw DimensionMismatch("gradient: plan/cost shape mismatch");
    }
    Eigen::ArrayXd row_term =
        tau * (T.rowwise().sum().array() / alpha.mass.array()).log();
    Eigen::ArrayXd col_term =
        tau * (T.colwise().sum().transpose().array() / beta.mass.array()).log();
    Matrix g = C.cost;
    g.array() += eta * (1.0 + T.array().log());
    g.array().colwise() += row_term;
    g.array().rowwise() += col_term.transpose();
    return g;
}

Matrix uot_projected_gradient(const CostMatrix& C, const MassVector& alpha,
                              const MassVector& beta, double eta, double tau,
                              int steps, double step_size) {
    if (C.rows() * C.cols() > 1024) {
        throw TooLarge("projected-gradient oracle limited to n_x*n_z <= 1024");
    }
    if (!(step_size > 0)) {
        throw InvalidSpec("step_size must be positive");
    }
    constexpr double kFloor = 1e-30;

    Matrix T = (alpha.mass * beta.mass.transpose()) /
               std::max(alpha.total(), beta.total());
    T = T.cwiseMax(kFloor);
    double f = primal_objective(T, C, alpha, beta, eta, tau);

    double step = step_size;
    int rejected = 0;
    for (int it = 0; it < steps; ++it) {
        Matrix g = uot_primal_gradient(T, C, alpha, beta, eta, tau);
        Matrix trial = (T.array() * (-step * g.array()).exp()).cwiseMax(kFloor);
        double f_trial = primal_objective(trial, C, alpha, beta, eta, tau);
        if (f_trial <= f) {
            T = std::move(trial);
            f = f_trial;
            rejected = 0;
            step = std::min(step * 1.1, 10.0 * step_size);
        } else {
            step *= 0.5;
            if (++rejected >= 50) {
                throw Diverged("objective increased for 50 consecutive steps");
            }
        }
    }
    return T;
}

}  // namespace uft
