#pragma once

#include <utility>
#include <vector>

#include "btgf/types.hpp"

namespace btgf {

inline constexpr double kBarlowLambda = 0.0051;  ///< fixed invariance/redundancy trade-off

/// Per-pair Barlow Twins evaluation with the pieces the bound formulas need.
struct BarlowTwinsDetail {
    double loss = 0.0;
    Matrix M;        ///< d x d cross-correlation
    Vector norms1;   ///< column norms of Z1
    Vector norms2;   ///< column norms of Z2
};

/// Scales every column of Z to unit l2 norm. Returns the normalized matrix
/// and the original norms. A column norm below 1e-12 signals representation
/// collapse and raises DegenerateColumnError.
std::pair<Matrix, Vector> column_normalize(const Matrix& Z);

/// M_ij = cosine of column i of Z1 with column j of Z2.
Matrix cross_correlation(const Matrix& Z1, const Matrix& Z2);

/// sum_i (M_ii - 1)^2 + lambda * sum_{i != j} M_ij^2.
double barlow_twins(const Matrix& Z1, const Matrix& Z2, double lambda);

/// barlow_twins plus the intermediates (M and column norms).
BarlowTwinsDetail barlow_twins_detail(const Matrix& Z1, const Matrix& Z2, double lambda);

/// Mean of barlow_twins over all unordered view pairs (v1 < v2).
double feature_decorrelation(const std::vector<Matrix>& Z_list, double lambda);

/// Student-t (one degree of freedom) similarities between rows of Z and the
/// cluster centers, row-normalized.
Matrix soft_assignment(const Matrix& Z, const Matrix& centers);

/// p_ij = (q_ij^2 / colsum_j) / row-normalizer. Sharpened self-supervision
/// target; a zero column sum in Q raises DegenerateClusterError.
Matrix target_distribution(const Matrix& Q);

/// KL(P || Q) = sum_ij p_ij log(p_ij / q_ij).
double kl_clustering_loss(const Matrix& P, const Matrix& Q);

/// Scaled cosine error: sum over rows of (1 - cos(Xt_i, Xr_i))^2.
double sce(const Matrix& Xt, const Matrix& Xr);

/// Mean of per-view sce over the given (smoothed, reconstructed) pairs.
double msce(const std::vector<std::pair<Matrix, Matrix>>& pairs);

/// Unweighted sum of the three objectives.
double total_loss(double l_msce, double l_fd, double l_clu);

}  // namespace btgf
