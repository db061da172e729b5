#include "uft/losses.hpp"

#include <cmath>
#include <set>
#include <string>

#include "uft/measures.hpp"

namespace uft {

namespace {

void check_same_shape(const FeatureSet& a, const FeatureSet& b,
                      const char* what) {
    if (a.n() != b.n() || a.d() != b.d()) {
        throw DimensionMismatch(std::string(what) + ": shape mismatch");
    }
}

}  // namespace

double feature_consistency_loss(const FeatureSet& A, const FeatureSet& B) {
    check_same_shape(A, B, "feature_consistency_loss");
    return (A.data - B.data).cwiseAbs().mean();
}

double perceptual_distance(const FeatureSet& feat_y, const FeatureSet& feat_x) {
    check_same_shape(feat_y, feat_x, "perceptual_distance");
    return (feat_y.data - feat_x.data).cwiseAbs().mean();
}

double contextual_loss(const FeatureSet& feat_z, const FeatureSet& feat_y,
                       double bandwidth) {
    if (!(bandwidth > 0)) throw InvalidSpec("bandwidth must be positive");
    Matrix dist = cosine_cost_matrix(feat_z, feat_y).cost;
    double sum_max = 0.0;
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
        Eigen::ArrayXd rel =
            dist.row(i).array() / (dist.row(i).minCoeff() + 1e-5);
        Eigen::ArrayXd w = ((1.0 - rel) / bandwidth).exp();
        sum_max += w.maxCoeff() / w.sum();
    }
    return -std::log(sum_max / double(dist.rows()));
}

std::vector<int> argmax_match_cosine(const FeatureSet& X, const FeatureSet& Z) {
    Matrix cost = cosine_cost_matrix(X, Z).cost;
    std::vector<int> match(cost.rows());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
        // max similarity == min cosine distance; strict < keeps smallest j
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < cost.cols(); ++j) {
            if (cost(i, j) < cost(i, best)) best = j;
        }
        match[i] = static_cast<int>(best);
    }
    return match;
}

std::vector<int> argmax_match_plan(const Matrix& T) {
    if ((T.array() < 0).any()) {
        throw NegativePlanEntry("plan has a negative entry");
    }
    std::vector<int> match(T.rows());
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
        if ((T.row(i).array() < 1e-30).all()) {
            throw EmptyRow("plan row " + std::to_string(i) + " carries no mass");
        }
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < T.cols(); ++j) {
            if (T(i, j) > T(i, best)) best = j;
        }
        match[i] = static_cast<int>(best);
    }
    return match;
}

MatchingReport matching_report(const std::vector<int>& match,
                               const std::vector<int>& labels_x,
                               const std::vector<int>& labels_z,
                               const Matrix& T,
                               const std::vector<bool>& outlier_mask_z) {
    const size_t n = match.size();
    if (labels_x.size() != n || size_t(T.rows()) != n ||
        labels_z.size() != size_t(T.cols()) ||
        outlier_mask_z.size() != size_t(T.cols())) {
        throw DimensionMismatch("matching_report: length mismatch");
    }
    MatchingReport report;

    std::set<int> distinct(match.begin(), match.end());
    report.many_to_one_rate = double(n - distinct.size()) / double(n);

    double total = T.sum();
    double leaked = 0.0;
    for (Eigen::Index j = 0; j < T.cols(); ++j) {
        if (outlier_mask_z[j]) leaked += T.col(j).sum();
    }
    report.outlier_leakage = total > 0 ? leaked / total : 0.0;

    size_t correct = 0;
    for (size_t i = 0; i < n; ++i) {
        if (labels_x[i] == labels_z[match[i]]) ++correct;
    }
    report.accuracy = double(correct) / double(n);
    return report;
}

double weighted_loss_sum(const std::vector<double>& values,
                         const std::vector<double>& weights) {
    if (values.size() != weights.size()) {
        throw DimensionMismatch("weighted_loss_sum: length mismatch");
    }
    double total = 0.0;
    for (size_t i = 0; i < values.size(); ++i) total += weights[i] * values[i];
    return total;
}

}  // namespace uft
