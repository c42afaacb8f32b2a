#pragma once

#include <utility>
#include <vector>

#include "btgf/types.hpp"

namespace btgf {

/// Clustering scores plus the label mapping that produced the accuracy.
struct ClusterEvaluation {
    double acc = 0.0;
    double f1 = 0.0;
    double nmi = 0.0;
    double ari = 0.0;
    std::vector<int> mapping;  ///< mapping[predicted id] = matched true id
};

/// Accuracy maximized over label permutations by solving the assignment
/// problem on the contingency matrix (Kuhn-Munkres).
std::pair<double, std::vector<int>> hungarian_accuracy(const Labels& pred, const Labels& truth);

/// Unweighted mean of per-class F1 after relabeling pred through mapping.
/// A class with no predictions or no members contributes 0.
double macro_f1(const Labels& pred, const Labels& truth, const std::vector<int>& mapping);

/// Mutual information normalized by the arithmetic mean of the entropies
/// (natural log). If either partition has zero entropy: 1 when the
/// partitions are identical, else 0.
double nmi(const Labels& pred, const Labels& truth);

/// Adjusted Rand index from pair counts.
double ari(const Labels& pred, const Labels& truth);

/// All four metrics in one pass.
ClusterEvaluation evaluate_clustering(const Labels& pred, const Labels& truth);

/// Mean silhouette coefficient of the labeling over rows of Z; used as the
/// unsupervised sweep criterion. Returns -1 for a single-cluster labeling.
double silhouette_score(const Matrix& Z, const Labels& labels);

}  // namespace btgf
