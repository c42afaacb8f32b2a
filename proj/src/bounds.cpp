#include "btgf/bounds.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "btgf/errors.hpp"
#include "btgf/losses.hpp"

namespace btgf {

Matrix inner_product_matrix(const Matrix& Xt1, const Matrix& Xt2) {
    if (Xt1.rows() != Xt2.rows())
        throw ShapeError("inner_product_matrix: row counts " + std::to_string(Xt1.rows()) +
                         " vs " + std::to_string(Xt2.rows()));
    return Xt1.transpose() * Xt2;
}

Definiteness definiteness(const Matrix& H, double tol) {
    if (H.rows() != H.cols()) throw ShapeError("definiteness: matrix not square");
    Matrix sym = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    const double spectral = std::max(std::abs(lo), std::abs(hi));
    if (lo >= -tol * spectral) return Definiteness::psd;
    if (hi <= tol * spectral) return Definiteness::nsd;
    return Definiteness::indefinite;
}

double prop1_lower_bound(const Vector& norms1, const Vector& norms2) {
    if (norms1.size() != norms2.size()) throw ShapeError("prop1_lower_bound: norm vectors differ in length");
    if (norms1.size() == 0) throw ParameterError("prop1_lower_bound: empty norms");
    if (norms1.minCoeff() <= 0.0 || norms2.minCoeff() <= 0.0)
        throw ParameterError("prop1_lower_bound: norms must be positive");
    const double denom = norms1.maxCoeff() * norms2.maxCoeff();
    double bound = 0.0;
    for (Index i = 0; i < norms1.size(); ++i) {
        const double r = norms1[i] * norms2[i] / denom;
        bound += r * r;
    }
    return bound;
}

double prop2_upper_bound(const Matrix& M, double lambda) {
    if (M.rows() != M.cols()) throw ShapeError("prop2_upper_bound: M not square");
    const Index d = M.rows();
    double offdiag = 0.0;
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            if (i != j) offdiag += M(i, j) * M(i, j);
    return static_cast<double>(d) + lambda * offdiag;
}

BoundTrace trace_bounds(const LossReport& history) {
    if (history.epochs.empty()) throw ParameterError("trace_bounds: empty training history");
    return BoundTrace{history.pair_bounds};
}

BoundTrialReport run_bound_trials(std::uint64_t seed, int trials) {
    if (trials < 1) throw ParameterError("run_bound_trials: trials must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> n_dist(4, 24), f_dist(2, 8), d_dist(2, 6);

    BoundTrialReport rep;
    rep.trials = trials;
    rep.min_gap_lower = std::numeric_limits<double>::infinity();
    rep.min_gap_upper = std::numeric_limits<double>::infinity();
    constexpr double tol = 1e-9;

    for (int t = 0; t < trials; ++t) {
        const int n = n_dist(rng), f = f_dist(rng), d = d_dist(rng);
        Matrix Xt1(n, f), W(f, d);
        for (Index i = 0; i < Xt1.size(); ++i) Xt1.data()[i] = gauss(rng);
        for (Index i = 0; i < W.size(); ++i) W.data()[i] = gauss(rng);

        // Proposition 1: Xt2 = -Xt1 makes H = -Xt1^T Xt1 negative semi-definite.
        const Matrix Z1 = Xt1 * W;
        {
            const Matrix Z2 = -Z1;
            BarlowTwinsDetail bt = barlow_twins_detail(Z1, Z2, kBarlowLambda);
            const double lower = prop1_lower_bound(bt.norms1, bt.norms2);
            const double gap = bt.loss - lower;
            rep.min_gap_lower = std::min(rep.min_gap_lower, gap);
            if (gap >= -tol) ++rep.prop1_pass;
        }
        // Proposition 2: Xt2 = Xt1 makes H positive semi-definite.
        {
            BarlowTwinsDetail bt = barlow_twins_detail(Z1, Z1, kBarlowLambda);
            bool diag_ok = true;
            for (Index i = 0; i < bt.M.rows(); ++i)
                if (bt.M(i, i) < 0.0 || bt.M(i, i) > 1.0 + 1e-12) diag_ok = false;
            const double upper = prop2_upper_bound(bt.M, kBarlowLambda);
            const double gap = upper - bt.loss;
            rep.min_gap_upper = std::min(rep.min_gap_upper, gap);
            if (diag_ok && gap >= -tol) ++rep.prop2_pass;
        }
    }
    return rep;
}

}  // namespace btgf
