#include <doctest.h>

#include "uft/measures.hpp"

using namespace uft;

TEST_CASE("cosine cost of identical unit vectors is zero") {
    FeatureSet x{Matrix{{1.0, 0.0}}};
    CostMatrix c = cosine_cost_matrix(x, x);
    CHECK(c.rows() == 1);
    CHECK(c.cost(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cosine cost of orthogonal and antipodal vectors") {
    FeatureSet x{Matrix{{1.0, 0.0}}};
    FeatureSet z_orth{Matrix{{0.0, 1.0}}};
    FeatureSet z_anti{Matrix{{-1.0, 0.0}}};
    CHECK(cosine_cost_matrix(x, z_orth).cost(0, 0) == doctest::Approx(1.0));
    CHECK(cosine_cost_matrix(x, z_anti).cost(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("cosine cost entries stay in [0, 2]") {
    Matrix xd(5, 3), zd(7, 3);
    unsigned s = 12345;
    auto next = [&s] {
        s = s * 1103515245u + 12345u;
        return double(s % 2000) / 1000.0 - 1.0;
    };
    for (int i = 0; i < xd.size(); ++i) xd.data()[i] = next() + 0.1;
    for (int i = 0; i < zd.size(); ++i) zd.data()[i] = next() + 0.1;
    CostMatrix c = cosine_cost_matrix(FeatureSet{xd}, FeatureSet{zd});
    CHECK((c.cost.array() >= 0.0).all());
    CHECK((c.cost.array() <= 2.0).all());
}

TEST_CASE("cosine cost rejects zero-norm rows and dimension mismatch") {
    FeatureSet zero{Matrix{{0.0, 0.0}}};
    FeatureSet ok{Matrix{{1.0, 0.0}}};
    FeatureSet ok3{Matrix{{1.0, 0.0, 0.0}}};
    CHECK_THROWS_AS(cosine_cost_matrix(zero, ok), ZeroNormFeature);
    CHECK_THROWS_AS(cosine_cost_matrix(ok, zero), ZeroNormFeature);
    CHECK_THROWS_AS(cosine_cost_matrix(ok, ok3), DimensionMismatch);
}

TEST_CASE("self cost has zero diagonal for unit rows") {
    Matrix xd(4, 3);
    xd << 1, 0, 0, 0, 1, 0, 0, 0, 1, 0.6, 0.8, 0;
    CostMatrix c = cosine_cost_matrix(FeatureSet{xd}, FeatureSet{xd});
    CHECK(c.cost.diagonal().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cosine cost invariant to positive per-row rescaling") {
    Matrix xd(3, 2), zd(3, 2);
    xd << 1, 2, -3, 0.5, 0.2, 0.9;
    zd << 0.3, -1, 2, 2, 1, 0;
    CostMatrix base = cosine_cost_matrix(FeatureSet{xd}, FeatureSet{zd});
    Matrix xs = xd, zs = zd;
    xs.row(0) *= 7.0;
    xs.row(2) *= 0.01;
    zs.row(1) *= 250.0;
    CostMatrix scaled = cosine_cost_matrix(FeatureSet{xs}, FeatureSet{zs});
    CHECK((base.cost - scaled.cost).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("masses clamp to the floor when the other set has zero mean") {
    FeatureSet x{Matrix{{1.0, 0.0}, {0.0, 1.0}}};
    FeatureSet z{Matrix{{1.0, 0.0}, {-1.0, 0.0}}};  // rows sum to zero
    auto [alpha, beta] = compute_masses(x, z);
    CHECK((alpha.mass.array() == kMassClamp).all());
}

TEST_CASE("masses equal one when every row equals the mean") {
    FeatureSet x{Matrix{{1.0, 0.0}, {1.0, 0.0}}};
    auto [alpha, beta] = compute_masses(x, x);
    CHECK(alpha.mass.isApprox(Vector::Ones(2)));
    CHECK(beta.mass.isApprox(Vector::Ones(2)));
}

TEST_CASE("masses match an explicit evaluation of the relevance rule") {
    Matrix zd(3, 2);
    zd << 1, 0, 0.8, 0.6, 0.9, -0.1;
    Vector mean_z = zd.colwise().mean();
    Matrix xd(2, 2);
    xd << mean_z(0), mean_z(1),       // aligned with mean(Z)
        -mean_z(1), mean_z(0);        // orthogonal to it
    auto [alpha, beta] = compute_masses(FeatureSet{xd}, FeatureSet{zd});
    CHECK(alpha.mass(0) > alpha.mass(1));
    for (int i = 0; i < 2; ++i) {
        double raw = 0.0;
        for (int c = 0; c < 2; ++c) raw += xd(i, c) * mean_z(c);
        CHECK(alpha.mass(i) ==
              doctest::Approx(std::max(raw, kMassClamp)).epsilon(1e-12));
    }
    Vector mean_x = xd.colwise().mean();
    for (int j = 0; j < 3; ++j) {
        double raw = zd.row(j).dot(mean_x);
        CHECK(beta.mass(j) ==
              doctest::Approx(std::max(raw, kMassClamp)).epsilon(1e-12));
    }
}

TEST_CASE("mass estimation is permutation-equivariant") {
    Matrix xd(3, 2), zd(3, 2);
    xd << 1, 0, 0.6, 0.8, 0, 1;
    zd << 0.8, 0.6, 1, 0, 0.6, -0.8;
    auto [alpha, beta] = compute_masses(FeatureSet{xd}, FeatureSet{zd});
    Matrix xp(3, 2);
    xp.row(0) = xd.row(2);
    xp.row(1) = xd.row(0);
    xp.row(2) = xd.row(1);
    auto [alpha_p, beta_p] = compute_masses(FeatureSet{xp}, FeatureSet{zd});
    CHECK(alpha_p.mass(0) == alpha.mass(2));
    CHECK(alpha_p.mass(1) == alpha.mass(0));
    CHECK(alpha_p.mass(2) == alpha.mass(1));
    CHECK(beta_p.mass.isApprox(beta.mass));
}

TEST_CASE("compute_masses rejects mismatched dimensions") {
    FeatureSet x{Matrix{{1.0, 0.0}}};
    FeatureSet z{Matrix{{1.0, 0.0, 0.0}}};
    CHECK_THROWS_AS(compute_masses(x, z), DimensionMismatch);
}
