#include "btgf/filter.hpp"

#include <Eigen/Cholesky>

#include "btgf/errors.hpp"
#include "btgf/graph.hpp"

namespace btgf {

std::string to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::learned: return "learned";
        case FilterKind::low_pass: return "low_pass";
        case FilterKind::mix_pass: return "mix_pass";
        case FilterKind::identity: return "identity";
    }
    return "?";
}

FilterKind filter_kind_from_string(const std::string& s) {
    if (s == "learned") return FilterKind::learned;
    if (s == "low_pass") return FilterKind::low_pass;
    if (s == "mix_pass") return FilterKind::mix_pass;
    if (s == "identity") return FilterKind::identity;
    throw ParameterError("unknown filter kind '" + s + "'");
}

void FilterConfig::validate() const {
    if (gamma <= 0.0) throw ParameterError("filter gamma must be > 0, got " + std::to_string(gamma));
    if (k < 1) throw ParameterError("filter order k must be >= 1, got " + std::to_string(k));
}

namespace {

void check_inputs(const Matrix& X, const Matrix& ref, const char* what) {
    if (!X.allFinite()) throw ParameterError(std::string(what) + ": attributes contain non-finite values");
    if (X.rows() != ref.rows())
        throw ShapeError(std::string(what) + ": X has " + std::to_string(X.rows()) +
                         " rows but the graph has " + std::to_string(ref.rows()) + " nodes");
}

}  // namespace

Matrix solve_filter_naive_phi(const Matrix& X, const Matrix& Phi, double gamma) {
    check_inputs(X, Phi, "solve_filter_naive");
    // Stationarity of the objective is K (X X^T + gamma I) = X X^T + gamma Phi;
    // solved as the transposed SPD system, never via an explicit inverse.
    Matrix gram = X * X.transpose();
    Matrix lhs = gram;
    lhs.diagonal().array() += gamma;
    Matrix rhs = gamma * Phi + gram;
    return lhs.llt().solve(rhs.transpose()).transpose();
}

Matrix solve_filter_woodbury_phi(const Matrix& X, const Matrix& Phi, double gamma) {
    check_inputs(X, Phi, "solve_filter_woodbury");
    // K = Phi + X X^T / gamma - (gamma Phi + X X^T) X C^{-1} X^T / gamma^2,
    // C = I + X^T X / gamma. Only the f x f system C is factorized.
    Matrix xtx = X.transpose() * X;
    Matrix C = xtx / gamma;
    C.diagonal().array() += 1.0;
    Matrix T = gamma * (Phi * X) + X * xtx;       // (gamma Phi + X X^T) X, n x f
    Matrix S = C.llt().solve(X.transpose());      // f x n
    return Phi + (X * X.transpose()) / gamma - (T * S) / (gamma * gamma);
}

Matrix solve_filter_naive(const Matrix& X, const Matrix& L, const FilterConfig& cfg) {
    cfg.validate();
    return solve_filter_naive_phi(X, low_pass_filter(L, cfg.k), cfg.gamma);
}

Matrix solve_filter_woodbury(const Matrix& X, const Matrix& L, const FilterConfig& cfg) {
    cfg.validate();
    return solve_filter_woodbury_phi(X, low_pass_filter(L, cfg.k), cfg.gamma);
}

Matrix apply_filter(const Matrix& K, const Matrix& X) {
    if (K.cols() != X.rows())
        throw ShapeError("apply_filter: K is " + std::to_string(K.rows()) + "x" +
                         std::to_string(K.cols()) + ", X has " + std::to_string(X.rows()) + " rows");
    return K * X;
}

FilterMatrix make_filter(const Matrix& adjacency, const Matrix& X, const FilterConfig& cfg) {
    cfg.validate();
    FilterMatrix out;
    out.provenance = cfg;
    switch (cfg.kind) {
        case FilterKind::identity:
            out.K = Matrix::Identity(adjacency.rows(), adjacency.cols());
            break;
        case FilterKind::low_pass:
            out.K = low_pass_filter(laplacian(normalize_adjacency(adjacency)), cfg.k);
            break;
        case FilterKind::mix_pass:
            out.K = mix_pass_filter(laplacian(normalize_adjacency(adjacency)));
            break;
        case FilterKind::learned: {
            const Matrix L = laplacian(normalize_adjacency(adjacency));
            out.K = X.cols() < X.rows() ? solve_filter_woodbury(X, L, cfg)
                                        : solve_filter_naive(X, L, cfg);
            break;
        }
    }
    return out;
}

}  // namespace btgf
