#include "uft/synth.hpp"

#include <cmath>
#include <numbers>

namespace uft {

std::uint64_t SplitMix64::next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_uniform() {
    return double((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double SplitMix64::next_symmetric() {
    return double(next_u64() >> 11) * 0x1.0p-52 - 1.0;
}

double SplitMix64::next_normal() {
    double u1 = next_uniform();
    double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

Vector unit_gaussian(SplitMix64& rng, int d) {
    Vector v(d);
    do {
        for (int i = 0; i < d; ++i) v[i] = rng.next_normal();
    } while (v.norm() < 1e-6);
    return v / v.norm();
}

Vector sample_around(SplitMix64& rng, const Vector& center, double spread) {
    Vector v = center;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] += spread * rng.next_normal();
    }
    double norm = v.norm();
    if (norm < 1e-12) return center;  // vanishingly unlikely, keep it defined
    return v / norm;
}

}  // namespace

ClusteredPair gen_clustered_pair(const SynthSpec& spec) {
    if (spec.n < spec.k || spec.k < 1 || spec.d < 1 || spec.outlier_frac < 0 ||
        spec.outlier_frac >= 1 || !(spec.spread > 0)) {
        throw InvalidSpec("invalid synthetic spec");
    }
    SplitMix64 rng(spec.seed);

    std::vector<Vector> centers;
    centers.reserve(spec.k + 1);
    for (int c = 0; c <= spec.k; ++c) centers.push_back(unit_gaussian(rng, spec.d));

    ClusteredPair pair;
    pair.X.data.resize(spec.n, spec.d);
    pair.Z.data.resize(spec.n, spec.d);
    pair.labels_x.resize(spec.n);
    pair.labels_z.resize(spec.n);
    pair.outlier_mask_z.assign(spec.n, false);

    for (int i = 0; i < spec.n; ++i) {
        int label = i % spec.k;
        pair.labels_x[i] = label;
        pair.X.data.row(i) = sample_around(rng, centers[label], spec.spread);
    }
    int n_outliers = int(spec.outlier_frac * spec.n);
    for (int j = 0; j < spec.n; ++j) {
        bool outlier = j >= spec.n - n_outliers;
        int label = outlier ? spec.k : j % spec.k;
        pair.labels_z[j] = label;
        pair.outlier_mask_z[j] = outlier;
        pair.Z.data.row(j) = sample_around(rng, centers[label], spec.spread);
    }
    return pair;
}

FeaturePyramid gen_pyramid_from_image_grid(const FeatureSet& base, int levels,
                                           double perturb_magnitude,
                                           std::uint64_t seed) {
    if (levels < 1) throw InvalidSpec("levels must be >= 1");
    int side = int(std::lround(std::sqrt(double(base.n()))));
    if (Eigen::Index(side) * side != base.n()) {
        throw NotSquare("base feature set does not form a square grid");
    }
    SplitMix64 rng(seed);

    FeaturePyramid pyramid;
    pyramid.base_h = pyramid.base_w = side;
    pyramid.levels.push_back(FeatureMap{base.data, side, side});
    for (int k = 1; k < levels; ++k) {
        const FeatureMap& prev = pyramid.levels.back();
        FeatureMap fine;
        fine.h = prev.h * 2;
        fine.w = prev.w * 2;
        fine.data.resize(Eigen::Index(fine.h) * fine.w, base.d());
        for (int r = 0; r < fine.h; ++r) {
            for (int c = 0; c < fine.w; ++c) {
                fine.data.row(Eigen::Index(r) * fine.w + c) =
                    prev.data.row(Eigen::Index(r / 2) * prev.w + c / 2);
            }
        }
        if (perturb_magnitude != 0.0) {
            for (Eigen::Index i = 0; i < fine.data.rows(); ++i) {
                for (Eigen::Index j = 0; j < fine.data.cols(); ++j) {
                    fine.data(i, j) += perturb_magnitude * rng.next_symmetric();
                }
            }
        }
        pyramid.levels.push_back(std::move(fine));
    }
    return pyramid;
}

}  // namespace uft
