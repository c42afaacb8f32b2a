#pragma once

#include <optional>
#include <vector>

#include "btgf/types.hpp"

namespace btgf {

/// One node set observed under several relations (views), with shared
/// node attributes and optional ground-truth classes.
struct MultiRelationalGraph {
    Index n = 0;                     ///< node count
    std::vector<Matrix> adjacency;   ///< V symmetric nonnegative n x n matrices
    Matrix attributes;               ///< n x f
    std::optional<Labels> labels;    ///< length n, values in [0, c)
    int num_classes = 0;             ///< declared class / cluster count c

    Index views() const { return static_cast<Index>(adjacency.size()); }
    Index attr_dim() const { return attributes.cols(); }

    /// Throws if the invariants above do not hold.
    void validate() const;
};

/// A = D^{-1/2} (adj + I) D^{-1/2} where D is the degree matrix of adj + I.
/// Self-loops are added before the degree computation, so every D_ii >= 1.
/// Asymmetry below 1e-9 (max-abs) is symmetrized as (adj + adj^T)/2; anything
/// larger is rejected.
Matrix normalize_adjacency(const Matrix& adj);

/// L = I - A.
Matrix laplacian(const Matrix& A);

/// (I - L/2)^k by repeated multiplication, k >= 1.
Matrix low_pass_filter(const Matrix& L, int k);

/// (I - L/2)^2 + (L/2)^2.
Matrix mix_pass_filter(const Matrix& L);

}  // namespace btgf
