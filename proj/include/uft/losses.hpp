#pragma once

#include <vector>

#include "uft/measures.hpp"

namespace uft {

struct MatchingReport {
    double many_to_one_rate = 0.0;  ///< (n - distinct matched columns) / n
    double outlier_leakage = 0.0;   ///< plan mass into masked columns / total
    double accuracy = 0.0;          ///< label agreement of matched pairs
};

/// Mean absolute elementwise difference between two equally shaped sets.
double feature_consistency_loss(const FeatureSet& A, const FeatureSet& B);

/// L1 distance between externally supplied feature activations; same
/// contract as feature_consistency_loss.
double perceptual_distance(const FeatureSet& feat_y, const FeatureSet& feat_x);

/// Contextual loss: cosine distances d_ij between rows of featZ and featY,
/// relative distances d~_ij = d_ij / (min_k d_ik + 1e-5), similarities
/// w_ij = exp((1 - d~_ij)/h) normalized over j; returns
/// -log(mean_i max_j CX_ij).
double contextual_loss(const FeatureSet& feat_z, const FeatureSet& feat_y,
                       double bandwidth = 0.5);

/// Nearest exemplar per row by cosine similarity, ties to the smallest index.
std::vector<int> argmax_match_cosine(const FeatureSet& X, const FeatureSet& Z);

/// Column of maximal plan mass per row, ties to the smallest index. Throws
/// EmptyRow when a row is entirely below 1e-30.
std::vector<int> argmax_match_plan(const Matrix& T);

MatchingReport matching_report(const std::vector<int>& match,
                               const std::vector<int>& labels_x,
                               const std::vector<int>& labels_z,
                               const Matrix& T,
                               const std::vector<bool>& outlier_mask_z);

/// Weighted sum of loss terms with caller-supplied weights.
double weighted_loss_sum(const std::vector<double>& values,
                         const std::vector<double>& weights);

}  // namespace uft
