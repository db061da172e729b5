#include <doctest.h>

#include "uft/losses.hpp"
#include "uft/synth.hpp"

using namespace uft;

TEST_CASE("generator streams are deterministic per seed") {
    SplitMix64 a(99), b(99), c(100);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        std::uint64_t x = a.next_u64();
        all_equal &= (x == b.next_u64());
        any_diff |= (x != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform draws stay in their documented ranges") {
    SplitMix64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.next_uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        double s = rng.next_symmetric();
        CHECK(s >= -1.0);
        CHECK(s < 1.0);
    }
}

TEST_CASE("normal draws have plausible first moments") {
    SplitMix64 rng(2);
    double sum = 0.0, sq = 0.0;
    int n = 20000;
    for (int i = 0; i < n; ++i) {
        double x = rng.next_normal();
        sum += x;
        sq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("clustered pairs are bit-identical per seed") {
    SynthSpec spec;
    spec.n = 20;
    spec.d = 6;
    spec.k = 3;
    spec.outlier_frac = 0.15;
    spec.seed = 31;
    ClusteredPair a = gen_clustered_pair(spec);
    ClusteredPair b = gen_clustered_pair(spec);
    CHECK(a.X.data == b.X.data);
    CHECK(a.Z.data == b.Z.data);
    CHECK(a.labels_x == b.labels_x);
    CHECK(a.labels_z == b.labels_z);
    CHECK(a.outlier_mask_z == b.outlier_mask_z);

    spec.seed = 32;
    ClusteredPair c = gen_clustered_pair(spec);
    CHECK(a.X.data != c.X.data);
}

TEST_CASE("generated rows are unit norm") {
    SynthSpec spec;
    spec.n = 25;
    spec.d = 7;
    spec.k = 4;
    spec.outlier_frac = 0.2;
    spec.seed = 8;
    ClusteredPair pair = gen_clustered_pair(spec);
    for (int i = 0; i < spec.n; ++i) {
        CHECK(std::abs(pair.X.data.row(i).norm() - 1.0) < 1e-10);
        CHECK(std::abs(pair.Z.data.row(i).norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("outlier bookkeeping follows the fraction") {
    SynthSpec spec;
    spec.n = 20;
    spec.k = 2;
    spec.seed = 3;

    spec.outlier_frac = 0.0;
    ClusteredPair clean = gen_clustered_pair(spec);
    for (bool m : clean.outlier_mask_z) CHECK(!m);

    spec.outlier_frac = 0.25;
    ClusteredPair dirty = gen_clustered_pair(spec);
    int count = 0;
    for (size_t j = 0; j < dirty.outlier_mask_z.size(); ++j) {
        if (dirty.outlier_mask_z[j]) {
            ++count;
            CHECK(dirty.labels_z[j] == spec.k);  // the extra center's label
        }
    }
    CHECK(count == 5);
}

TEST_CASE("vanishing spread collapses points onto shared centers") {
    SynthSpec spec;
    spec.n = 12;
    spec.d = 5;
    spec.k = 3;
    spec.spread = 1e-12;
    spec.seed = 21;
    ClusteredPair pair = gen_clustered_pair(spec);
    CostMatrix c = cosine_cost_matrix(pair.X, pair.Z);
    for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < spec.n; ++j) {
            if (pair.labels_x[size_t(i)] == pair.labels_z[size_t(j)]) {
                CHECK(c.cost(i, j) < 1e-9);
            }
        }
    }
}

TEST_CASE("matching beats a label shuffle on clustered data") {
    SynthSpec spec;
    spec.n = 30;
    spec.d = 8;
    spec.k = 3;
    spec.outlier_frac = 0.1;
    spec.seed = 7;
    ClusteredPair pair = gen_clustered_pair(spec);
    std::vector<int> match = argmax_match_cosine(pair.X, pair.Z);
    auto accuracy = [&](const std::vector<int>& labels_z) {
        int hits = 0;
        for (size_t i = 0; i < match.size(); ++i) {
            hits += pair.labels_x[i] == labels_z[size_t(match[i])];
        }
        return double(hits) / double(match.size());
    };
    std::vector<int> shuffled = pair.labels_z;
    SplitMix64 rng(1234);
    for (size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[rng.next_u64() % i]);
    }
    CHECK(accuracy(pair.labels_z) >= accuracy(shuffled));
}

TEST_CASE("spec validation") {
    SynthSpec bad;
    bad.k = 0;
    CHECK_THROWS_AS(gen_clustered_pair(bad), InvalidSpec);
    bad = SynthSpec{};
    bad.outlier_frac = 1.0;
    CHECK_THROWS_AS(gen_clustered_pair(bad), InvalidSpec);
    bad = SynthSpec{};
    bad.n = 2;
    bad.k = 3;
    CHECK_THROWS_AS(gen_clustered_pair(bad), InvalidSpec);
}

TEST_CASE("single-level pyramid is just the base") {
    Matrix base = Matrix::Random(9, 2);
    FeaturePyramid pyr = gen_pyramid_from_image_grid(FeatureSet{base}, 1);
    REQUIRE(pyr.levels.size() == 1);
    CHECK(pyr.base_h == 3);
    CHECK(pyr.levels[0].data == base);
}

TEST_CASE("unperturbed pyramids are block-constant upsamplings") {
    Matrix base = Matrix::Random(4, 3);
    FeaturePyramid pyr = gen_pyramid_from_image_grid(FeatureSet{base}, 3);
    REQUIRE(pyr.levels.size() == 3);
    for (int k = 1; k < 3; ++k) {
        int side = 2 << k;  // base side 2 doubled k times
        const Matrix& lvl = pyr.levels[size_t(k)].data;
        REQUIRE(lvl.rows() == side * side);
        for (int fr = 0; fr < side; ++fr) {
            for (int fc = 0; fc < side; ++fc) {
                int scale = 1 << k;
                CHECK(lvl.row(fr * side + fc) ==
                      base.row((fr / scale) * 2 + fc / scale));
            }
        }
    }
}

TEST_CASE("perturbed pyramids stay within the stated magnitude") {
    Matrix base = Matrix::Random(4, 2);
    FeaturePyramid pyr =
        gen_pyramid_from_image_grid(FeatureSet{base}, 2, 0.05, 11);
    const Matrix& lvl = pyr.levels[1].data;
    for (int fr = 0; fr < 4; ++fr) {
        for (int fc = 0; fc < 4; ++fc) {
            Eigen::RowVectorXd diff =
                lvl.row(fr * 4 + fc) - base.row((fr / 2) * 2 + fc / 2);
            CHECK(diff.cwiseAbs().maxCoeff() <= 0.05);
        }
    }
    // deterministic per seed
    FeaturePyramid again =
        gen_pyramid_from_image_grid(FeatureSet{base}, 2, 0.05, 11);
    CHECK(again.levels[1].data == lvl);
}

TEST_CASE("pyramid guards") {
    CHECK_THROWS_AS(gen_pyramid_from_image_grid(FeatureSet{Matrix::Zero(5, 2)},
                                                2),
                    NotSquare);
    CHECK_THROWS_AS(gen_pyramid_from_image_grid(FeatureSet{Matrix::Zero(4, 2)},
                                                0),
                    InvalidSpec);
}
