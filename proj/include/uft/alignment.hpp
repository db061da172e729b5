#pragma once

#include <vector>

#include "uft/measures.hpp"

namespace uft {

/// One h x w feature map stored row-major as an (h*w) x d matrix.
struct FeatureMap {
    Matrix data;
    int h = 0;
    int w = 0;
};

/// Feature maps at increasing resolution; level k is (h*2^k) x (w*2^k).
struct FeaturePyramid {
    std::vector<FeatureMap> levels;
    int base_h = 0;
    int base_w = 0;
};

inline constexpr double kRowEps = 1e-12;

/// Barycentric projection: output row i = sum_j T_ij z_j / (sum_j T_ij + eps).
FeatureSet barycentric_warp(const Matrix& T, const FeatureSet& Z);

/// Expands a plan solved on an hx x wx / hz x wz grid pair to the grids
/// upsampled by s (s in {2, 4}): every base entry T_ij is split uniformly
/// over the s^2 x s^2 fine sub-cell pairs (fine entry T_ij / s^4), which
/// preserves total mass exactly. Rows/columns are row-major over the grids.
Matrix expand_plan(const Matrix& T, int s, int hx, int wx, int hz, int wz);

/// Square-grid convenience overload: both sides are h x w with h = w.
Matrix expand_plan(const Matrix& T, int s);

/// Warps every pyramid level with the base plan expanded to that level's
/// resolution. Both sides of the plan are assumed to live on the pyramid's
/// base grid.
FeaturePyramid multi_stage_transport(const Matrix& T,
                                     const FeaturePyramid& pyramid);

/// mean |rownorm(T') rownorm(T) Z - Z|; rows of T (and of T') are normalized
/// to unit sum before composing, so the loss is insensitive to plan mass.
double cycle_loss(const Matrix& T, const FeatureSet& Z);

}  // namespace uft
