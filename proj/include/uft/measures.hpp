#pragma once

#include <Eigen/Dense>
#include <utility>

#include "uft/errors.hpp"

namespace uft {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A set of n feature vectors, one per row (n x d).
struct FeatureSet {
    Matrix data;

    Eigen::Index n() const { return data.rows(); }
    Eigen::Index d() const { return data.cols(); }
};

/// Nonnegative masses attached to the rows of a FeatureSet.
struct MassVector {
    Vector mass;

    double total() const { return mass.sum(); }
    Eigen::Index size() const { return mass.size(); }
};

/// Pairwise cosine-distance matrix, entries in [0, 2].
struct CostMatrix {
    Matrix cost;

    Eigen::Index rows() const { return cost.rows(); }
    Eigen::Index cols() const { return cost.cols(); }
};

inline constexpr double kZeroNormThreshold = 1e-12;
inline constexpr double kMassClamp = 1e-6;

/// C_ij = 1 - <x_i, z_j> / (|x_i| |z_j|). Throws ZeroNormFeature for
/// degenerate rows and DimensionMismatch when feature dimensions differ.
CostMatrix cosine_cost_matrix(const FeatureSet& X, const FeatureSet& Z);

/// Cross-relevance masses: alpha_i = x_i . mean(Z), beta_j = z_j . mean(X),
/// each clamped below at kMassClamp so the result is strictly positive.
std::pair<MassVector, MassVector> compute_masses(const FeatureSet& X,
                                                 const FeatureSet& Z);

}  // namespace uft
