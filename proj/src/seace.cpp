#include "uft/seace.hpp"

#include <cmath>
#include <string>

namespace uft {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(what) + ": shape mismatch " +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
    }
}

}  // namespace

Matrix semantic_activation_matrix(const FeatureSet& X, bool softmax) {
    if (X.n() < 1) throw InvalidSpec("empty feature set");
    if (!X.data.allFinite()) throw NonFiniteValue("non-finite features");
    Matrix logits = X.data * X.data.transpose();
    if (!softmax) return logits;
    logits /= std::sqrt(double(X.d()));
    Matrix M(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        Eigen::ArrayXd row = logits.row(i).array();
        row -= row.maxCoeff();
        Eigen::ArrayXd w = row.exp();
        M.row(i) = w / w.sum();
    }
    return M;
}

ModulationPair aggregate_modulation(const Matrix& M,
                                    const ModulationPair& mods) {
    check_same_shape(mods.gamma, mods.mu, "aggregate_modulation");
    if (M.cols() != mods.gamma.rows()) {
        throw DimensionMismatch("attention matrix does not match modulation rows");
    }
    return {M * mods.gamma, M * mods.mu};
}

ActivationMap modulate_conditional(const ActivationMap& x_act,
                                   const ModulationPair& mods) {
    check_same_shape(x_act.data, mods.gamma, "modulate_conditional");
    check_same_shape(x_act.data, mods.mu, "modulate_conditional");
    return {mods.gamma.cwiseProduct(x_act.data) + mods.mu};
}

ModulationPair project_modulation(const ActivationMap& x_act_mod,
                                  const AffineMap& affine1,
                                  const AffineMap& affine2) {
    Eigen::Index c = x_act_mod.channels();
    for (const AffineMap* a : {&affine1, &affine2}) {
        if (a->weight.rows() != c || a->weight.cols() != c ||
            a->bias.size() != c) {
            throw DimensionMismatch("affine map does not match channel count");
        }
    }
    Matrix gamma = x_act_mod.data * affine1.weight.transpose();
    gamma.rowwise() += affine1.bias.transpose();
    Matrix mu = x_act_mod.data * affine2.weight.transpose();
    mu.rowwise() += affine2.bias.transpose();
    return {std::move(gamma), std::move(mu)};
}

std::pair<Vector, Vector> positional_norm_stats(const ActivationMap& l_act) {
    Eigen::Index c = l_act.channels();
    if (c < 2) throw TooFewChannels("positional stats need at least 2 channels");
    Vector mu_p = l_act.data.rowwise().mean();
    Vector var = (l_act.data.colwise() - mu_p).array().square().rowwise().mean();
    Vector gamma_p = (var.array() + kStdEps).sqrt();
    return {std::move(mu_p), std::move(gamma_p)};
}

ActivationMap seace_denormalize(const ActivationMap& l_act,
                                const ModulationPair& mods) {
    check_same_shape(l_act.data, mods.gamma, "seace_denormalize");
    check_same_shape(l_act.data, mods.mu, "seace_denormalize");
    auto [mu_p, gamma_p] = positional_norm_stats(l_act);
    Matrix normalized = gamma_p.cwiseInverse().asDiagonal() *
                        (l_act.data.colwise() - mu_p);
    return {mods.gamma.cwiseProduct(normalized) + mods.mu};
}

ActivationMap seace_pipeline(const FeatureSet& X, const ActivationMap& x_act,
                             const ModulationPair& exemplar_mods,
                             const ActivationMap& l_act,
                             const AffineMap& affine1, const AffineMap& affine2,
                             bool softmax) {
    Matrix M = semantic_activation_matrix(X, softmax);
    ModulationPair aggregated = aggregate_modulation(M, exemplar_mods);
    ActivationMap modulated = modulate_conditional(x_act, aggregated);
    ModulationPair projected = project_modulation(modulated, affine1, affine2);
    return seace_denormalize(l_act, projected);
}

}  // namespace uft
