#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "btgf/errors.hpp"
#include "btgf/graph.hpp"
#include "oracles.hpp"

using namespace btgf;

namespace {

Matrix random_adjacency(Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix adj = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (unit(rng) < 0.3) {
                const double w = unit(rng) + 0.1;
                adj(i, j) = w;
                adj(j, i) = w;
            }
    return adj;
}

Vector sym_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

}  // namespace

TEST_CASE("normalize_adjacency on an isolated node yields a pure self-loop") {
    Matrix adj = Matrix::Zero(1, 1);
    Matrix A = normalize_adjacency(adj);
    CHECK(A(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize_adjacency on a 2-node path") {
    Matrix adj(2, 2);
    adj << 0, 1, 1, 0;
    Matrix A = normalize_adjacency(adj);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) CHECK(A(i, j) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normalize_adjacency on an empty graph gives the identity") {
    Matrix adj = Matrix::Zero(2, 2);
    CHECK((normalize_adjacency(adj) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("normalize_adjacency rejects bad inputs") {
    CHECK_THROWS_AS(normalize_adjacency(Matrix::Zero(2, 3)), ShapeError);
    Matrix asym(2, 2);
    asym << 0, 1, 0, 0;
    CHECK_THROWS_AS(normalize_adjacency(asym), ShapeError);
    Matrix neg(2, 2);
    neg << 0, -1, -1, 0;
    CHECK_THROWS_AS(normalize_adjacency(neg), ParameterError);
}

TEST_CASE("tiny asymmetry is forgiven and symmetrized") {
    Matrix adj(2, 2);
    adj << 0, 1.0, 1.0 + 5e-10, 0;
    Matrix A = normalize_adjacency(adj);
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("laplacian basics") {
    CHECK(laplacian(Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    Matrix A(2, 2);
    A << 0.5, 0.5, 0.5, 0.5;
    Matrix L = laplacian(A);
    CHECK(L(0, 0) == doctest::Approx(0.5));
    CHECK(L(0, 1) == doctest::Approx(-0.5));
    Vector ev = sym_eigenvalues(L);
    CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ev(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(laplacian(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("low_pass_filter examples") {
    CHECK((low_pass_filter(Matrix::Zero(3, 3), 4) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() ==
          0.0);
    Matrix L(2, 2);
    L << 0.5, -0.5, -0.5, 0.5;
    Matrix k1 = low_pass_filter(L, 1);
    CHECK(k1(0, 0) == doctest::Approx(0.75));
    CHECK(k1(0, 1) == doctest::Approx(0.25));
    Matrix k2 = low_pass_filter(L, 2);
    CHECK(k2(0, 0) == doctest::Approx(0.625));
    CHECK(k2(0, 1) == doctest::Approx(0.375));
    CHECK_THROWS_AS(low_pass_filter(L, 0), ParameterError);
}

TEST_CASE("mix_pass_filter examples") {
    CHECK((mix_pass_filter(Matrix::Zero(2, 2)) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() ==
          0.0);
    Matrix L(2, 2);
    L << 0.5, -0.5, -0.5, 0.5;
    Matrix K = mix_pass_filter(L);
    CHECK(K(0, 0) == doctest::Approx(0.75));
    CHECK(K(0, 1) == doctest::Approx(0.25));
    CHECK(K(1, 0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(mix_pass_filter(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("normalized adjacency has spectral radius at most 1") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix A = normalize_adjacency(random_adjacency(20, rng));
        Vector ev = sym_eigenvalues(A);
        CHECK(ev.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
    }
}

TEST_CASE("laplacian eigenvalues lie in [0, 2]") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        Vector ev = sym_eigenvalues(laplacian(normalize_adjacency(random_adjacency(20, rng))));
        CHECK(ev.minCoeff() >= -1e-9);
        CHECK(ev.maxCoeff() <= 2.0 + 1e-9);
    }
}

TEST_CASE("low-pass orders compose multiplicatively") {
    std::mt19937_64 rng(13);
    Matrix L = laplacian(normalize_adjacency(random_adjacency(15, rng)));
    for (auto [k1, k2] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
        Matrix lhs = low_pass_filter(L, k1 + k2);
        Matrix rhs = low_pass_filter(L, k1) * low_pass_filter(L, k2);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("all filter family outputs stay symmetric on symmetric input") {
    std::mt19937_64 rng(14);
    Matrix L = laplacian(normalize_adjacency(random_adjacency(12, rng)));
    for (const Matrix& m : {low_pass_filter(L, 3), mix_pass_filter(L)})
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("graph validation catches inconsistencies") {
    MultiRelationalGraph g;
    g.n = 2;
    g.adjacency = {Matrix::Zero(2, 2)};
    g.attributes = Matrix::Zero(3, 4);
    g.num_classes = 2;
    CHECK_THROWS_AS(g.validate(), ShapeError);
    g.attributes = Matrix::Zero(2, 4);
    CHECK_NOTHROW(g.validate());
    g.labels = Labels{0, 5};
    CHECK_THROWS_AS(g.validate(), DataError);
}
