#include "btgf/graph.hpp"

#include <cmath>
#include <string>

#include "btgf/errors.hpp"

namespace btgf {

namespace {

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw ShapeError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
}

}  // namespace

void MultiRelationalGraph::validate() const {
    if (adjacency.empty()) throw ParameterError("graph has no views (V >= 1 required)");
    if (attributes.rows() != n)
        throw ShapeError("attribute row count " + std::to_string(attributes.rows()) +
                         " does not match node count " + std::to_string(n));
    for (size_t v = 0; v < adjacency.size(); ++v) {
        const Matrix& a = adjacency[v];
        if (a.rows() != n || a.cols() != n)
            throw ShapeError("adjacency[" + std::to_string(v) + "] is " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + ", expected " + std::to_string(n) +
                             "x" + std::to_string(n));
        if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9)
            throw ShapeError("adjacency[" + std::to_string(v) + "] is not symmetric");
        if (a.minCoeff() < 0.0)
            throw ParameterError("adjacency[" + std::to_string(v) + "] has negative entries");
    }
    if (labels) {
        if (static_cast<Index>(labels->size()) != n)
            throw ShapeError("label count " + std::to_string(labels->size()) +
                             " does not match node count " + std::to_string(n));
        for (int y : *labels)
            if (y < 0 || (num_classes > 0 && y >= num_classes))
                throw DataError("label " + std::to_string(y) + " outside [0, " +
                                std::to_string(num_classes) + ")");
    }
}

Matrix normalize_adjacency(const Matrix& adj) {
    require_square(adj, "normalize_adjacency");
    if (!adj.allFinite()) throw ParameterError("normalize_adjacency: non-finite entries");
    if (adj.size() > 0 && adj.minCoeff() < 0.0)
        throw ParameterError("normalize_adjacency: negative entries");

    const double asym =
        adj.size() > 0 ? (adj - adj.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-9)
        throw ShapeError("normalize_adjacency: asymmetry " + std::to_string(asym) +
                         " exceeds tolerance 1e-9");

    Matrix a = 0.5 * (adj + adj.transpose());
    a.diagonal().array() += 1.0;  // renormalization: self-loops before degrees

    Vector dinv_sqrt = a.rowwise().sum().cwiseInverse().cwiseSqrt();
    return dinv_sqrt.asDiagonal() * a * dinv_sqrt.asDiagonal();
}

Matrix laplacian(const Matrix& A) {
    require_square(A, "laplacian");
    return Matrix::Identity(A.rows(), A.cols()) - A;
}

Matrix low_pass_filter(const Matrix& L, int k) {
    require_square(L, "low_pass_filter");
    if (k < 1) throw ParameterError("low_pass_filter: order k must be >= 1, got " + std::to_string(k));
    const Matrix base = Matrix::Identity(L.rows(), L.cols()) - 0.5 * L;
    Matrix out = base;
    for (int i = 1; i < k; ++i) out = out * base;
    return out;
}

Matrix mix_pass_filter(const Matrix& L) {
    require_square(L, "mix_pass_filter");
    const Matrix lp = Matrix::Identity(L.rows(), L.cols()) - 0.5 * L;
    const Matrix hp = 0.5 * L;
    return lp * lp + hp * hp;
}

}  // namespace btgf
