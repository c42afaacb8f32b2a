#pragma once

#include <string>

#include "btgf/types.hpp"

namespace btgf {

enum class FilterKind { learned, low_pass, mix_pass, identity };

std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& s);

/// Configuration of the per-view attribute filter.
struct FilterConfig {
    double gamma = 10.0;                    ///< trade-off between fit and low-pass prior, > 0
    int k = 2;                              ///< low-pass order, >= 1
    FilterKind kind = FilterKind::learned;

    void validate() const;
};

/// A solved (or analytic) n x n filter together with the config it came from.
struct FilterMatrix {
    Matrix K;
    FilterConfig provenance;
};

/// Minimizes ||X - K X||_F^2 + gamma ||K - Phi||_F^2 through the n x n
/// normal equations K (X X^T + gamma I) = gamma Phi + X X^T, solved by a
/// dense SPD factorization. Phi = (I - L/2)^k.
Matrix solve_filter_naive(const Matrix& X, const Matrix& L, const FilterConfig& cfg);

/// Same minimizer via the Woodbury rearrangement: the only factorization is
/// the f x f matrix I + X^T X / gamma, so the cost drops to O(n^2 f) when
/// n > f.
Matrix solve_filter_woodbury(const Matrix& X, const Matrix& L, const FilterConfig& cfg);

/// Variants taking a precomputed low-pass matrix Phi instead of L.
Matrix solve_filter_naive_phi(const Matrix& X, const Matrix& Phi, double gamma);
Matrix solve_filter_woodbury_phi(const Matrix& X, const Matrix& Phi, double gamma);

/// X_smooth = K X.
Matrix apply_filter(const Matrix& K, const Matrix& X);

/// Builds the filter for one view's adjacency matrix: learned filters go
/// through the Woodbury path when f < n and the naive path otherwise;
/// low_pass / mix_pass / identity are analytic.
FilterMatrix make_filter(const Matrix& adjacency, const Matrix& X, const FilterConfig& cfg);

}  // namespace btgf
