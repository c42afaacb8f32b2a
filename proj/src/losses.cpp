#include "btgf/losses.hpp"

#include <cmath>
#include <string>

#include "btgf/errors.hpp"

namespace btgf {

namespace {

constexpr double kDegenerateNorm = 1e-12;

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError(std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}

}  // namespace

std::pair<Matrix, Vector> column_normalize(const Matrix& Z) {
    Vector norms = Z.colwise().norm();
    for (Index i = 0; i < norms.size(); ++i)
        if (norms[i] < kDegenerateNorm)
            throw DegenerateColumnError("embedding column " + std::to_string(i) +
                                        " has norm " + std::to_string(norms[i]) +
                                        " < 1e-12 (representation collapse)");
    return {Z * norms.cwiseInverse().asDiagonal(), std::move(norms)};
}

Matrix cross_correlation(const Matrix& Z1, const Matrix& Z2) {
    require_same_shape(Z1, Z2, "cross_correlation");
    return column_normalize(Z1).first.transpose() * column_normalize(Z2).first;
}

BarlowTwinsDetail barlow_twins_detail(const Matrix& Z1, const Matrix& Z2, double lambda) {
    if (lambda <= 0.0) throw ParameterError("barlow_twins: lambda must be > 0");
    require_same_shape(Z1, Z2, "barlow_twins");
    BarlowTwinsDetail out;
    auto [zh1, n1] = column_normalize(Z1);
    auto [zh2, n2] = column_normalize(Z2);
    out.M = zh1.transpose() * zh2;
    out.norms1 = std::move(n1);
    out.norms2 = std::move(n2);
    double invariance = 0.0, redundancy = 0.0;
    const Index d = out.M.rows();
    for (Index i = 0; i < d; ++i) {
        const double di = out.M(i, i) - 1.0;
        invariance += di * di;
        for (Index j = 0; j < d; ++j)
            if (j != i) redundancy += out.M(i, j) * out.M(i, j);
    }
    out.loss = invariance + lambda * redundancy;
    return out;
}

double barlow_twins(const Matrix& Z1, const Matrix& Z2, double lambda) {
    return barlow_twins_detail(Z1, Z2, lambda).loss;
}

double feature_decorrelation(const std::vector<Matrix>& Z_list, double lambda) {
    const size_t V = Z_list.size();
    if (V < 2) throw ParameterError("feature_decorrelation needs V >= 2 views, got " + std::to_string(V));
    double sum = 0.0;
    size_t pairs = 0;
    for (size_t v1 = 0; v1 < V; ++v1)
        for (size_t v2 = v1 + 1; v2 < V; ++v2) {
            sum += barlow_twins(Z_list[v1], Z_list[v2], lambda);
            ++pairs;
        }
    return sum / static_cast<double>(pairs);
}

Matrix soft_assignment(const Matrix& Z, const Matrix& centers) {
    if (Z.cols() != centers.cols())
        throw ShapeError("soft_assignment: embedding dim " + std::to_string(Z.cols()) +
                         " vs center dim " + std::to_string(centers.cols()));
    if (centers.rows() < 2) throw ParameterError("soft_assignment needs c >= 2 centers");
    const Index n = Z.rows(), c = centers.rows();
    Matrix Q(n, c);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < c; ++j)
            Q(i, j) = 1.0 / (1.0 + (Z.row(i) - centers.row(j)).squaredNorm());
        Q.row(i) /= Q.row(i).sum();
    }
    return Q;
}

Matrix target_distribution(const Matrix& Q) {
    Vector colsum = Q.colwise().sum();
    for (Index j = 0; j < colsum.size(); ++j)
        if (!(colsum[j] > 0.0))
            throw DegenerateClusterError("soft-assignment column " + std::to_string(j) +
                                         " sums to zero (empty-cluster collapse)");
    Matrix P = Q.array().square().matrix() * colsum.cwiseInverse().asDiagonal();
    for (Index i = 0; i < P.rows(); ++i) P.row(i) /= P.row(i).sum();
    return P;
}

double kl_clustering_loss(const Matrix& P, const Matrix& Q) {
    require_same_shape(P, Q, "kl_clustering_loss");
    if (P.minCoeff() <= 0.0 || Q.minCoeff() <= 0.0)
        throw DomainError("kl_clustering_loss: entries must be strictly positive");
    return (P.array() * (P.array() / Q.array()).log()).sum();
}

double sce(const Matrix& Xt, const Matrix& Xr) {
    require_same_shape(Xt, Xr, "sce");
    double loss = 0.0;
    for (Index i = 0; i < Xt.rows(); ++i) {
        const double nt = Xt.row(i).norm(), nr = Xr.row(i).norm();
        if (nt < kDegenerateNorm || nr < kDegenerateNorm)
            throw DegenerateRowError("sce: row " + std::to_string(i) + " has near-zero norm");
        const double c = 1.0 - Xt.row(i).dot(Xr.row(i)) / (nt * nr);
        loss += c * c;
    }
    return loss;
}

double msce(const std::vector<std::pair<Matrix, Matrix>>& pairs) {
    if (pairs.empty()) throw ParameterError("msce needs at least one view");
    double sum = 0.0;
    for (const auto& [xt, xr] : pairs) sum += sce(xt, xr);
    return sum / static_cast<double>(pairs.size());
}

double total_loss(double l_msce, double l_fd, double l_clu) {
    return l_msce + l_fd + l_clu;
}

}  // namespace btgf
