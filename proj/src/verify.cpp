#include "uft/verify.hpp"

#include <cmath>
#include <sstream>

#include "uft/losses.hpp"
#include "uft/oracle.hpp"
#include "uft/sinkhorn.hpp"

namespace uft {

CostMatrix random_cost(SplitMix64& rng, int nx, int nz) {
    Matrix c(nx, nz);
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
            c(i, j) = 2.0 * (rng.next_uniform() - 0x1.0p-53);
        }
    }
    return CostMatrix{std::move(c)};
}

namespace {

MassVector unit_masses(int n) { return MassVector{Vector::Ones(n)}; }

void corrupt(Matrix& plan) { plan.array() += 0.05 * plan.maxCoeff(); }

CheckResult check_assignment_agreement(const VerifyOptions& opts) {
    CheckResult result{"assignment_agreement", false, ""};
    SplitMix64 rng(opts.seed);
    SolverOptions sopts;
    sopts.eta = 1e-3;
    sopts.tol = 1e-10;
    sopts.max_iters = 20000;
    sopts.threads = opts.threads;
    sopts.track_duals = false;

    int recovered = 0;
    bool cost_ok = true;
    for (int t = 0; t < opts.trials; ++t) {
        CostMatrix C = random_cost(rng, opts.n, opts.n);
        AssignmentResult oracle = brute_force_assignment(C);
        TransportSolution sol =
            solve_balanced(C, unit_masses(opts.n), unit_masses(opts.n), sopts);
        if (opts.inject_fault) corrupt(sol.plan);
        double plan_cost = (C.cost.array() * sol.plan.array()).sum();
        if (plan_cost > oracle.cost * 1.01 + 1e-12) cost_ok = false;
        std::vector<int> match = argmax_match_plan(sol.plan);
        bool same = true;
        for (int i = 0; i < opts.n; ++i) {
            if (match[i] != oracle.permutation[i]) same = false;
        }
        if (same) recovered += 1;
    }
    double pct = 100.0 * recovered / opts.trials;
    std::ostringstream detail;
    detail << "permutation agreement " << pct << "% over " << opts.trials
           << " trials, plan cost within 1%: " << (cost_ok ? "yes" : "no");
    result.detail = detail.str();
    result.passed = cost_ok && pct >= 95.0;
    return result;
}

CheckResult check_uot_oracle(const VerifyOptions& opts) {
    CheckResult result{"uot_oracle_objective", true, ""};
    SplitMix64 rng(opts.seed + 1);
    double worst = 0.0;
    for (int t = 0; t < 6; ++t) {
        int n = 4 + int(rng.next_u64() % 5);
        CostMatrix C = random_cost(rng, n, n);
        Vector a(n), b(n);
        for (int i = 0; i < n; ++i) a[i] = 0.5 + rng.next_uniform();
        for (int j = 0; j < n; ++j) b[j] = 0.5 + rng.next_uniform();
        MassVector alpha{a}, beta{b};
        SolverOptions sopts;
        sopts.eta = 1e-2;
        sopts.tau = (t % 3 == 0) ? 0.1 : (t % 3 == 1 ? 1.0 : 10.0);
        sopts.max_iters = 50000;
        sopts.tol = 1e-12;
        sopts.threads = opts.threads;
        sopts.track_duals = false;
        TransportSolution sol = solve_unbalanced(C, alpha, beta, sopts);
        if (opts.inject_fault) corrupt(sol.plan);
        double sinkhorn_obj =
            primal_objective(sol.plan, C, alpha, beta, sopts.eta, sopts.tau);
        Matrix oracle =
            uot_projected_gradient(C, alpha, beta, sopts.eta, sopts.tau,
                                   20000, 0.05);
        double oracle_obj =
            primal_objective(oracle, C, alpha, beta, sopts.eta, sopts.tau);
        double rel = std::abs(sinkhorn_obj - oracle_obj) /
                     std::max(std::abs(oracle_obj), 1e-12);
        worst = std::max(worst, rel);
    }
    std::ostringstream detail;
    detail << "worst relative objective gap " << worst << " (limit 0.005)";
    result.detail = detail.str();
    result.passed = worst <= 0.005;
    return result;
}

CheckResult check_gradient(const VerifyOptions& opts) {
    CheckResult result{"oracle_gradient_fd", true, ""};
    SplitMix64 rng(opts.seed + 2);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
        int n = 4;
        CostMatrix C = random_cost(rng, n, n);
        Vector a(n), b(n);
        for (int i = 0; i < n; ++i) a[i] = 0.5 + rng.next_uniform();
        for (int j = 0; j < n; ++j) b[j] = 0.5 + rng.next_uniform();
        MassVector alpha{a}, beta{b};
        Matrix T(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) T(i, j) = 0.2 + rng.next_uniform();
        }
        double eta = 1e-2, tau = 1.0, h = 1e-5;
        Matrix g = uot_primal_gradient(T, C, alpha, beta, eta, tau);
        if (opts.inject_fault) g.array() *= 1.01;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                Matrix Tp = T, Tm = T;
                Tp(i, j) += h;
                Tm(i, j) -= h;
                double fd = (primal_objective(Tp, C, alpha, beta, eta, tau) -
                             primal_objective(Tm, C, alpha, beta, eta, tau)) /
                            (2 * h);
                double rel = std::abs(g(i, j) - fd) /
                             std::max(std::abs(fd), 1e-8);
                worst = std::max(worst, rel);
            }
        }
    }
    std::ostringstream detail;
    detail << "worst relative gradient error " << worst << " (limit 1e-4)";
    result.detail = detail.str();
    result.passed = worst <= 1e-4;
    return result;
}

CheckResult check_dual_monotone(const VerifyOptions& opts) {
    CheckResult result{"dual_monotonicity", true, ""};
    SplitMix64 rng(opts.seed + 3);
    double worst_drop = 0.0;
    for (int t = 0; t < 5; ++t) {
        int n = 6;
        CostMatrix C = random_cost(rng, n, n);
        SolverOptions sopts;
        sopts.eta = 1e-2;
        sopts.tau = 1.0;
        sopts.max_iters = 5000;
        sopts.threads = opts.threads;
        TransportSolution sol = (t % 2 == 0)
            ? solve_unbalanced(C, unit_masses(n), unit_masses(n), sopts)
            : solve_balanced(C, unit_masses(n), unit_masses(n), sopts);
        for (size_t k = 1; k < sol.dual_history.size(); ++k) {
            double drop = sol.dual_history[k - 1] - sol.dual_history[k];
            if (opts.inject_fault && k == 1) drop += 1.0;
            worst_drop = std::max(worst_drop, drop);
        }
    }
    std::ostringstream detail;
    detail << "worst per-sweep dual decrease " << worst_drop
           << " (slack 1e-10)";
    result.detail = detail.str();
    result.passed = worst_drop <= 1e-10;
    return result;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
    if (opts.n > 8) throw TooLarge("verification assignment size limited to 8");
    return {
        check_assignment_agreement(opts),
        check_uot_oracle(opts),
        check_gradient(opts),
        check_dual_monotone(opts),
    };
}

}  // namespace uft
