#pragma once

#include <utility>

#include "uft/measures.hpp"

namespace uft {

/// Per-position scale/shift modulation parameters (n positions x c channels).
struct ModulationPair {
    Matrix gamma;
    Matrix mu;
};

/// Activations at n spatial positions with c channels.
struct ActivationMap {
    Matrix data;

    Eigen::Index positions() const { return data.rows(); }
    Eigen::Index channels() const { return data.cols(); }
};

/// Per-position linear map on the channel vector: out = W * in + b.
struct AffineMap {
    Matrix weight;  ///< c x c
    Vector bias;    ///< c

    static AffineMap identity(Eigen::Index c) {
        return {Matrix::Identity(c, c), Vector::Zero(c)};
    }
};

inline constexpr double kStdEps = 1e-5;

/// Self-attention over conditional features: logits x_i . x_j / sqrt(d),
/// row-softmaxed so every row sums to 1. With softmax = false returns the raw
/// dot products x_i . x_j.
Matrix semantic_activation_matrix(const FeatureSet& X, bool softmax = true);

/// gamma_X = M * gamma_Z, mu_X = M * mu_Z.
ModulationPair aggregate_modulation(const Matrix& M, const ModulationPair& mods);

/// X'_act = gamma_X (.) X_act + mu_X, entrywise.
ActivationMap modulate_conditional(const ActivationMap& x_act,
                                   const ModulationPair& mods);

/// gamma = affine1(X'_act), mu = affine2(X'_act), applied per position.
ModulationPair project_modulation(const ActivationMap& x_act_mod,
                                  const AffineMap& affine1,
                                  const AffineMap& affine2);

/// Per-position channel mean and standard deviation (population variance,
/// kStdEps added under the square root). Requires c >= 2.
std::pair<Vector, Vector> positional_norm_stats(const ActivationMap& l_act);

/// Positional normalization of l_act followed by the entrywise affine
/// gamma (.) normalized + mu.
ActivationMap seace_denormalize(const ActivationMap& l_act,
                                const ModulationPair& mods);

/// Full pipeline: self-attention over X, aggregation of exemplar modulation,
/// modulation of the conditional activation, projection to (gamma, mu), and
/// denormalization of the incoming translation activation.
ActivationMap seace_pipeline(const FeatureSet& X, const ActivationMap& x_act,
                             const ModulationPair& exemplar_mods,
                             const ActivationMap& l_act,
                             const AffineMap& affine1, const AffineMap& affine2,
                             bool softmax = true);

}  // namespace uft
