#include "uft/alignment.hpp"

#include <cmath>
#include <string>

namespace uft {

namespace {

int square_side(Eigen::Index n, const char* what) {
    int side = static_cast<int>(std::lround(std::sqrt(double(n))));
    if (Eigen::Index(side) * side != n) {
        throw NotSquare(std::string(what) + " of size " + std::to_string(n) +
                        " is not a square grid");
    }
    return side;
}

// fine row-major index -> base row-major index on an h x w grid scaled by s
std::vector<Eigen::Index> fine_to_base(int h, int w, int s) {
    std::vector<Eigen::Index> map(static_cast<size_t>(h) * w * s * s);
    int fw = w * s;
    for (int fr = 0; fr < h * s; ++fr) {
        for (int fc = 0; fc < fw; ++fc) {
            map[static_cast<size_t>(fr) * fw + fc] =
                Eigen::Index(fr / s) * w + fc / s;
        }
    }
    return map;
}

Matrix row_normalized(const Matrix& T) {
    Vector sums = T.rowwise().sum().cwiseMax(kRowEps);
    return sums.cwiseInverse().asDiagonal() * T;
}

}  // namespace

FeatureSet barycentric_warp(const Matrix& T, const FeatureSet& Z) {
    if (T.cols() != Z.n()) {
        throw DimensionMismatch("plan has " + std::to_string(T.cols()) +
                                " columns but Z has " + std::to_string(Z.n()) +
                                " rows");
    }
    Vector sums = T.rowwise().sum().array() + kRowEps;
    return FeatureSet{sums.cwiseInverse().asDiagonal() * (T * Z.data)};
}

Matrix expand_plan(const Matrix& T, int s, int hx, int wx, int hz, int wz) {
    if (s != 2 && s != 4) {
        throw UnsupportedScale("expansion scale must be 2 or 4, got " +
                               std::to_string(s));
    }
    if (T.rows() != Eigen::Index(hx) * wx || T.cols() != Eigen::Index(hz) * wz) {
        throw DimensionMismatch("plan shape does not match the base grids");
    }
    auto row_map = fine_to_base(hx, wx, s);
    auto col_map = fine_to_base(hz, wz, s);
    double scale = 1.0 / (double(s) * s * s * s);
    Matrix fine(row_map.size(), col_map.size());
    for (Eigen::Index g = 0; g < fine.cols(); ++g) {
        for (Eigen::Index f = 0; f < fine.rows(); ++f) {
            fine(f, g) = T(row_map[f], col_map[g]) * scale;
        }
    }
    return fine;
}

Matrix expand_plan(const Matrix& T, int s) {
    int hx = square_side(T.rows(), "plan row side");
    int hz = square_side(T.cols(), "plan column side");
    return expand_plan(T, s, hx, hx, hz, hz);
}

FeaturePyramid multi_stage_transport(const Matrix& T,
                                     const FeaturePyramid& pyramid) {
    if (pyramid.levels.empty()) {
        throw InvalidSpec("pyramid has no levels");
    }
    if (pyramid.levels[0].h != pyramid.base_h ||
        pyramid.levels[0].w != pyramid.base_w ||
        T.rows() != Eigen::Index(pyramid.base_h) * pyramid.base_w ||
        T.cols() != Eigen::Index(pyramid.base_h) * pyramid.base_w) {
        throw DimensionMismatch("pyramid level 0 does not match plan base grid");
    }
    FeaturePyramid out;
    out.base_h = pyramid.base_h;
    out.base_w = pyramid.base_w;
    out.levels.reserve(pyramid.levels.size());
    for (size_t k = 0; k < pyramid.levels.size(); ++k) {
        const FeatureMap& lvl = pyramid.levels[k];
        int scale = 1 << k;
        if (lvl.h != pyramid.base_h * scale || lvl.w != pyramid.base_w * scale) {
            throw DimensionMismatch("pyramid level " + std::to_string(k) +
                                    " does not double the base resolution");
        }
        Matrix plan = k == 0 ? T
                             : expand_plan(T, scale, pyramid.base_h,
                                           pyramid.base_w, pyramid.base_h,
                                           pyramid.base_w);
        FeatureSet warped = barycentric_warp(plan, FeatureSet{lvl.data});
        out.levels.push_back(FeatureMap{std::move(warped.data), lvl.h, lvl.w});
    }
    return out;
}

double cycle_loss(const Matrix& T, const FeatureSet& Z) {
    if (T.cols() != Z.n()) {
        throw DimensionMismatch("cycle_loss: plan/feature shape mismatch");
    }
    Matrix forward = row_normalized(T);
    Matrix backward = row_normalized(T.transpose());
    return (backward * (forward * Z.data) - Z.data).cwiseAbs().mean();
}

}  // namespace uft
