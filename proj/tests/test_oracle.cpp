#include <doctest.h>

#include <cmath>

#include "uft/oracle.hpp"
#include "uft/sinkhorn.hpp"
#include "uft/verify.hpp"

using namespace uft;

namespace {

MassVector ones(int n) { return MassVector{Vector::Ones(n)}; }

}  // namespace

TEST_CASE("assignment picks the zero diagonal") {
    Matrix c = Matrix::Ones(4, 4) - Matrix::Identity(4, 4);
    AssignmentResult r = brute_force_assignment(CostMatrix{c});
    CHECK(r.permutation == std::vector<int>{0, 1, 2, 3});
    CHECK(r.cost == doctest::Approx(0.0));
}

TEST_CASE("assignment on the 2x2 swap instance") {
    CostMatrix c{Matrix{{0.0, 1.0}, {1.0, 0.0}}};
    AssignmentResult r = brute_force_assignment(c);
    CHECK(r.permutation == std::vector<int>{0, 1});
    CHECK(r.cost == doctest::Approx(0.0));
}

TEST_CASE("assignment ties break to the lexicographically smallest") {
    CostMatrix c{Matrix::Constant(3, 3, 0.5)};
    AssignmentResult r = brute_force_assignment(c);
    CHECK(r.permutation == std::vector<int>{0, 1, 2});
    CHECK(r.cost == doctest::Approx(1.5));
}

TEST_CASE("assignment size and shape guards") {
    CHECK_THROWS_AS(brute_force_assignment(CostMatrix{Matrix::Zero(9, 9)}),
                    TooLarge);
    CHECK_THROWS_AS(brute_force_assignment(CostMatrix{Matrix::Zero(2, 3)}),
                    DimensionMismatch);
}

TEST_CASE("assignment result is exhaustively optimal on random instances") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        CostMatrix c = random_cost(rng, 5, 5);
        AssignmentResult r = brute_force_assignment(c);
        // check a handful of random permutations never beat the oracle
        std::vector<int> perm{0, 1, 2, 3, 4};
        for (int shuffle = 0; shuffle < 20; ++shuffle) {
            for (int i = 4; i > 0; --i) {
                int j = int(rng.next_u64() % std::uint64_t(i + 1));
                std::swap(perm[i], perm[size_t(j)]);
            }
            double cost = 0.0;
            for (int i = 0; i < 5; ++i) cost += c.cost(i, perm[size_t(i)]);
            CHECK(r.cost <= cost + 1e-12);
        }
    }
}

TEST_CASE("single-cell oracle agrees with the sinkhorn solver") {
    // small eta so the two conventions for the entropy reference measure
    // agree to well below the tolerance
    CostMatrix c{Matrix{{0.3}}};
    double eta = 1e-4, tau = 2.0;
    SolverOptions o;
    o.eta = eta;
    o.tau = tau;
    o.max_iters = 200000;
    o.tol = 1e-13;
    TransportSolution sol = solve_unbalanced(c, ones(1), ones(1), o);
    Matrix oracle =
        uot_projected_gradient(c, ones(1), ones(1), eta, tau, 20000, 0.05);
    CHECK(std::abs(oracle(0, 0) - sol.plan(0, 0)) < 1e-4);
}

TEST_CASE("analytic gradient matches central finite differences") {
    SplitMix64 rng(101);
    double eta = 1e-2, tau = 1.0, h = 1e-5;
    for (int trial = 0; trial < 3; ++trial) {
        CostMatrix c = random_cost(rng, 4, 4);
        Matrix t(4, 4);
        for (int i = 0; i < t.size(); ++i) {
            t.data()[i] = 0.05 + 0.2 * rng.next_uniform();
        }
        Matrix g = uot_primal_gradient(t, c, ones(4), ones(4), eta, tau);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                Matrix tp = t, tm = t;
                tp(i, j) += h;
                tm(i, j) -= h;
                double fd = (primal_objective(tp, c, ones(4), ones(4), eta, tau) -
                             primal_objective(tm, c, ones(4), ones(4), eta, tau)) /
                            (2 * h);
                CHECK(std::abs(g(i, j) - fd) <=
                      1e-4 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST_CASE("oracle objective matches the solver within half a percent") {
    SplitMix64 rng(55);
    double taus[] = {0.1, 1.0, 10.0};
    for (int trial = 0; trial < 6; ++trial) {
        int n = 3 + int(rng.next_u64() % 6);
        CostMatrix c = random_cost(rng, n, n);
        double eta = (trial % 2 == 0) ? 1e-2 : 1e-3;
        double tau = taus[trial % 3];
        SolverOptions o;
        o.eta = eta;
        o.tau = tau;
        o.max_iters = 20000;
        o.track_duals = false;
        TransportSolution sol = solve_unbalanced(c, ones(n), ones(n), o);
        Matrix oracle =
            uot_projected_gradient(c, ones(n), ones(n), eta, tau, 20000, 0.05);
        double f_oracle =
            primal_objective(oracle, c, ones(n), ones(n), eta, tau);
        CHECK(std::abs(sol.primal - f_oracle) <=
              0.005 * std::max(std::abs(f_oracle), 1e-6));
    }
}

TEST_CASE("near-balanced oracle concentrates on the optimal assignment") {
    SplitMix64 rng(91);
    CostMatrix c = random_cost(rng, 4, 4);
    AssignmentResult best = brute_force_assignment(c);
    Matrix plan =
        uot_projected_gradient(c, ones(4), ones(4), 1e-3, 1e3, 200000, 0.05);
    double off_support = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (best.permutation[size_t(i)] != j) off_support += plan(i, j);
        }
    }
    CHECK(off_support < 1e-2 * plan.sum());
}

TEST_CASE("assignment cost lower-bounds balanced transport cost") {
    SplitMix64 rng(61);
    for (int trial = 0; trial < 5; ++trial) {
        int n = 4 + int(rng.next_u64() % 3);
        CostMatrix c = random_cost(rng, n, n);
        SolverOptions o;
        o.eta = 1e-3;
        o.max_iters = 20000;
        o.track_duals = false;
        TransportSolution sol =
            solve_balanced(c, ones(n), ones(n), o);
        AssignmentResult best = brute_force_assignment(c);
        double plan_cost = (c.cost.array() * sol.plan.array()).sum();
        CHECK(best.cost <= plan_cost + 1e-9);
    }
}

TEST_CASE("projected gradient guards its inputs") {
    CHECK_THROWS_AS(uot_projected_gradient(CostMatrix{Matrix::Zero(33, 32)},
                                           ones(33), ones(32), 1e-2, 1.0, 10,
                                           0.1),
                    TooLarge);
    CHECK_THROWS_AS(uot_projected_gradient(CostMatrix{Matrix::Zero(2, 2)},
                                           ones(2), ones(2), 1e-2, 1.0, 10,
                                           0.0),
                    InvalidSpec);
}
