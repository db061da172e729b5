#include "uft/measures.hpp"

#include <cmath>
#include <string>

namespace uft {

namespace {

Vector row_norms_checked(const Matrix& m, const char* which) {
    Vector norms = m.rowwise().norm();
    for (Eigen::Index i = 0; i < norms.size(); ++i) {
        if (norms[i] < kZeroNormThreshold) {
            throw ZeroNormFeature(std::string(which) + " row " +
                                  std::to_string(i) + " has near-zero norm");
        }
    }
    return norms;
}

void check_same_dim(const FeatureSet& X, const FeatureSet& Z) {
    if (X.d() != Z.d()) {
        throw DimensionMismatch("feature dimensions differ: " +
                                std::to_string(X.d()) + " vs " +
                                std::to_string(Z.d()));
    }
}

}  // namespace

CostMatrix cosine_cost_matrix(const FeatureSet& X, const FeatureSet& Z) {
    check_same_dim(X, Z);
    Vector nx = row_norms_checked(X.data, "X");
    Vector nz = row_norms_checked(Z.data, "Z");

    Matrix cost = Matrix::Ones(X.n(), Z.n()) -
                  (nx.cwiseInverse().asDiagonal() * X.data) *
                      (nz.cwiseInverse().asDiagonal() * Z.data).transpose();
    // rounding can push entries a hair outside [0, 2]
    cost = cost.cwiseMax(0.0).cwiseMin(2.0);
    return CostMatrix{std::move(cost)};
}

std::pair<MassVector, MassVector> compute_masses(const FeatureSet& X,
                                                 const FeatureSet& Z) {
    check_same_dim(X, Z);
    Vector mean_z = Z.data.colwise().mean();
    Vector mean_x = X.data.colwise().mean();
    Vector alpha = (X.data * mean_z).cwiseMax(kMassClamp);
    Vector beta = (Z.data * mean_x).cwiseMax(kMassClamp);
    return {MassVector{std::move(alpha)}, MassVector{std::move(beta)}};
}

}  // namespace uft
