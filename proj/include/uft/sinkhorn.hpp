#pragma once

#include <limits>
#include <vector>

#include "uft/measures.hpp"

namespace uft {

struct SolverOptions {
    double eta = 1e-4;      ///< entropic coefficient
    double tau = 1.0;       ///< marginal-relaxation coefficient (unbalanced)
    int max_iters = 5000;
    double tol = 1e-9;      ///< max |du|,|dv| per sweep below this -> converged
    int threads = 1;
    bool track_duals = true;  ///< record the dual objective after every sweep
};

struct TransportSolution {
    Matrix plan;
    Vector u;
    Vector v;
    int iters = 0;
    bool converged = false;
    double primal = 0.0;
    double dual = 0.0;
    std::vector<double> dual_history;  ///< per-sweep, when track_duals is set
};

inline constexpr double kBalancedTau = std::numeric_limits<double>::infinity();

/// Entropic OT with hard marginals, solved by alternating exact dual
/// coordinate maximization in the log domain. Requires
/// |alpha.total - beta.total| <= 1e-9 * total (throws UnbalancedInput).
TransportSolution solve_balanced(const CostMatrix& C, const MassVector& alpha,
                                 const MassVector& beta,
                                 const SolverOptions& opts);

/// Entropic unbalanced OT with KL marginal penalties of weight tau.
/// Update: u_i <- -(tau*eta/(tau+eta)) * lse_j(log beta_j + (v_j - C_ij)/eta),
/// symmetrically for v. Totals of alpha and beta may differ.
TransportSolution solve_unbalanced(const CostMatrix& C, const MassVector& alpha,
                                   const MassVector& beta,
                                   const SolverOptions& opts);

/// T_ij = alpha_i beta_j exp((u_i + v_j - C_ij) / eta), evaluated in the log
/// domain and exponentiated at the end.
Matrix plan_from_duals(const Vector& u, const Vector& v, const CostMatrix& C,
                       const MassVector& alpha, const MassVector& beta,
                       double eta);

/// Dual objective -F*(-u) - G*(-v) - eta * sum_ij alpha_i beta_j
/// exp((u_i + v_j - C_ij)/eta), with F*, G* the KL conjugates of weight tau.
/// Pass tau = kBalancedTau for the hard-marginal limit
/// <u,alpha> + <v,beta> - eta * sum_ij alpha_i beta_j exp(...).
double dual_objective(const Vector& u, const Vector& v, const CostMatrix& C,
                      const MassVector& alpha, const MassVector& beta,
                      double eta, double tau);

/// <C,T> + tau KL(T1||alpha) + tau KL(T'1||beta) - eta H(T), with 0 log 0 = 0.
double primal_objective(const Matrix& T, const CostMatrix& C,
                        const MassVector& alpha, const MassVector& beta,
                        double eta, double tau);

/// KL(a||b) = sum a_i log(a_i/b_i) - a_i + b_i, with 0 log 0 = 0.
double kl_divergence(const Vector& a, const Vector& b);

}  // namespace uft
