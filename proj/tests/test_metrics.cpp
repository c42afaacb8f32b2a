#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "btgf/errors.hpp"
#include "btgf/metrics.hpp"
#include "oracles.hpp"

using namespace btgf;

namespace {

Labels random_labels(int n, int c, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(0, c - 1);
    Labels out(n);
    for (int& x : out) x = dist(rng);
    return out;
}

}  // namespace

TEST_CASE("hungarian accuracy on relabelings and mixtures") {
    CHECK(hungarian_accuracy({1, 1, 0, 0}, {0, 0, 1, 1}).first == doctest::Approx(1.0));
    CHECK(hungarian_accuracy({0, 1, 0, 1}, {0, 0, 1, 1}).first == doctest::Approx(0.5));
    CHECK(hungarian_accuracy({0, 1, 2, 1}, {0, 1, 2, 1}).first == doctest::Approx(1.0));
    CHECK_THROWS_AS(hungarian_accuracy({0, 1}, {0}), ShapeError);
    CHECK_THROWS_AS(hungarian_accuracy({}, {}), ParameterError);
}

TEST_CASE("hungarian accuracy matches brute-force permutation search") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> n_dist(2, 12), c_dist(2, 4);
    for (int t = 0; t < 200; ++t) {
        const int n = n_dist(rng), c = c_dist(rng);
        Labels pred = random_labels(n, c, rng);
        Labels truth = random_labels(n, c, rng);
        CHECK(hungarian_accuracy(pred, truth).first ==
              doctest::Approx(oracle::brute_force_accuracy(pred, truth)).epsilon(1e-12));
    }
}

TEST_CASE("macro F1 after matching") {
    {
        auto [acc, mapping] = hungarian_accuracy({1, 1, 0, 0}, {0, 0, 1, 1});
        CHECK(macro_f1({1, 1, 0, 0}, {0, 0, 1, 1}, mapping) == doctest::Approx(1.0));
    }
    {
        // all-zero prediction vs balanced truth: class F1s are 2/3 and 0
        auto [acc, mapping] = hungarian_accuracy({0, 0, 0, 0}, {0, 0, 1, 1});
        CHECK(macro_f1({0, 0, 0, 0}, {0, 0, 1, 1}, mapping) == doctest::Approx(1.0 / 3.0));
    }
}

TEST_CASE("macro F1 is invariant under consistent relabeling") {
    std::mt19937_64 rng(22);
    Labels pred = random_labels(30, 3, rng);
    Labels truth = random_labels(30, 3, rng);
    auto [acc, mapping] = hungarian_accuracy(pred, truth);
    const double f1 = macro_f1(pred, truth, mapping);

    Labels swapped = pred;
    for (int& x : swapped) x = (x + 1) % 3;  // relabel predictions
    auto [acc2, mapping2] = hungarian_accuracy(swapped, truth);
    CHECK(acc2 == doctest::Approx(acc));
    CHECK(macro_f1(swapped, truth, mapping2) == doctest::Approx(f1));
}

TEST_CASE("nmi reference points") {
    CHECK(nmi({0, 1, 2, 0}, {0, 1, 2, 0}) == doctest::Approx(1.0));
    CHECK(nmi({1, 2, 0, 1}, {0, 1, 2, 0}) == doctest::Approx(1.0));  // pure relabeling
    CHECK(nmi({0, 1, 0, 1}, {0, 0, 1, 1}) == doctest::Approx(0.0).epsilon(1e-9));
    // degenerate single-cluster cases
    CHECK(nmi({0, 0, 0}, {0, 0, 0}) == doctest::Approx(1.0));
    CHECK(nmi({0, 0, 0}, {0, 1, 0}) == doctest::Approx(0.0));
}

TEST_CASE("ari reference points and symmetry") {
    CHECK(ari({0, 1, 2, 0}, {0, 1, 2, 0}) == doctest::Approx(1.0));
    CHECK(ari({0, 1, 0, 1}, {0, 0, 1, 1}) == doctest::Approx(-0.5));
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        Labels a = random_labels(15, 3, rng), b = random_labels(15, 3, rng);
        CHECK(ari(a, b) == doctest::Approx(ari(b, a)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ari({0}, {0}), ParameterError);
}

TEST_CASE("ari matches the pair-count oracle") {
    std::mt19937_64 rng(24);
    std::uniform_int_distribution<int> n_dist(2, 25), c_dist(2, 5);
    for (int t = 0; t < 100; ++t) {
        const int n = n_dist(rng), c = c_dist(rng);
        Labels pred = random_labels(n, c, rng);
        Labels truth = random_labels(n, c, rng);
        CHECK(ari(pred, truth) == doctest::Approx(oracle::pair_count_ari(pred, truth)).epsilon(1e-10));
    }
}

TEST_CASE("ari of independent random labelings is near zero in expectation") {
    std::mt19937_64 rng(25);
    double mean = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t)
        mean += ari(random_labels(40, 3, rng), random_labels(40, 3, rng));
    mean /= trials;
    CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("accuracy and nmi are invariant under predicted-id permutation") {
    std::mt19937_64 rng(26);
    Labels pred = random_labels(40, 4, rng);
    Labels truth = random_labels(40, 4, rng);
    const double acc0 = hungarian_accuracy(pred, truth).first;
    const double nmi0 = nmi(pred, truth);
    Labels perm = pred;
    for (int& x : perm) x = (x * 3 + 1) % 4;  // a bijection on {0..3}
    CHECK(hungarian_accuracy(perm, truth).first == doctest::Approx(acc0));
    CHECK(nmi(perm, truth) == doctest::Approx(nmi0));
}

TEST_CASE("evaluate_clustering bundles all four metrics") {
    ClusterEvaluation ev = evaluate_clustering({1, 1, 0, 0}, {0, 0, 1, 1});
    CHECK(ev.acc == doctest::Approx(1.0));
    CHECK(ev.f1 == doctest::Approx(1.0));
    CHECK(ev.nmi == doctest::Approx(1.0));
    CHECK(ev.ari == doctest::Approx(1.0));
    CHECK(ev.mapping.size() == 2);
}

TEST_CASE("silhouette prefers tight well-separated clusters") {
    Matrix Z(4, 2);
    Z << 0, 0, 0.1, 0, 10, 10, 10.1, 10;
    CHECK(silhouette_score(Z, {0, 0, 1, 1}) > 0.9);
    CHECK(silhouette_score(Z, {0, 1, 0, 1}) < 0.0);
    CHECK(silhouette_score(Z, {0, 0, 0, 0}) == doctest::Approx(-1.0));
}
