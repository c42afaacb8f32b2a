#pragma once

#include <cstdint>
#include <vector>

#include "btgf/report.hpp"
#include "btgf/types.hpp"

namespace btgf {

enum class Definiteness { psd, nsd, indefinite };

/// H = Xt1^T Xt2, the f x f inner-product matrix of two smoothed views.
Matrix inner_product_matrix(const Matrix& Xt1, const Matrix& Xt2);

/// Classifies H through the eigenvalues of its symmetric part (H + H^T)/2;
/// quadratic forms only see the symmetric part. tol is relative to the
/// spectral norm.
Definiteness definiteness(const Matrix& H, double tol = 1e-9);

/// sum_i (n1_i * n2_i / (max(n1) * max(n2)))^2, in (0, d].
double prop1_lower_bound(const Vector& norms1, const Vector& norms2);

/// d + lambda * sum_{i != j} M_ij^2.
double prop2_upper_bound(const Matrix& M, double lambda);

/// Reshapes the per-pair bound records of a training history into a
/// plot-ready trace. Throws on an empty history.
struct BoundTrace {
    std::vector<PairBound> records;
};
BoundTrace trace_bounds(const LossReport& history);

/// Randomized theorem checks: per trial, draws (Xt1, W), evaluates the
/// Barlow Twins loss against the Proposition-1 lower bound with Xt2 = -Xt1
/// (negative semi-definite inner product) and against the Proposition-2
/// upper bound with Xt2 = Xt1 (positive semi-definite), tolerance 1e-9.
struct BoundTrialReport {
    int trials = 0;
    int prop1_pass = 0;
    int prop2_pass = 0;
    double min_gap_lower = 0.0;  ///< min over trials of (l_bt - lower)
    double min_gap_upper = 0.0;  ///< min over trials of (upper - l_bt)
    bool all_passed() const { return prop1_pass == trials && prop2_pass == trials; }
};
BoundTrialReport run_bound_trials(std::uint64_t seed, int trials);

}  // namespace btgf
