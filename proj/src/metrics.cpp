#include "btgf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "btgf/errors.hpp"

namespace btgf {

namespace {

int label_range(const Labels& a, const Labels& b) {
    int c = 0;
    for (int x : a) c = std::max(c, x + 1);
    for (int x : b) c = std::max(c, x + 1);
    return c;
}

void check_pair(const Labels& pred, const Labels& truth, const char* what) {
    if (pred.size() != truth.size())
        throw ShapeError(std::string(what) + ": length mismatch " + std::to_string(pred.size()) +
                         " vs " + std::to_string(truth.size()));
    if (pred.empty()) throw ParameterError(std::string(what) + ": empty input");
    for (int x : pred)
        if (x < 0) throw ParameterError(std::string(what) + ": negative label");
    for (int x : truth)
        if (x < 0) throw ParameterError(std::string(what) + ": negative label");
}

// Kuhn-Munkres on a square cost matrix; returns rowsol[row] = assigned column.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= n; ++j)
                if (!used[j]) {
                    double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                    if (minv[j] < delta) { delta = minv[j]; j1 = j; }
                }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> rowsol(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) rowsol[p[j] - 1] = j - 1;
    return rowsol;
}

double entropy_nats(const std::vector<int>& counts, int n) {
    double h = 0.0;
    for (int c : counts)
        if (c > 0) {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log(p);
        }
    return h;
}

double comb2(long long x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); }

}  // namespace

std::pair<double, std::vector<int>> hungarian_accuracy(const Labels& pred, const Labels& truth) {
    check_pair(pred, truth, "hungarian_accuracy");
    const int c = label_range(pred, truth);
    const int n = static_cast<int>(pred.size());

    std::vector<std::vector<double>> count(c, std::vector<double>(c, 0.0));
    for (int i = 0; i < n; ++i) count[pred[i]][truth[i]] += 1.0;

    // Maximize matches = minimize (max - count).
    std::vector<std::vector<double>> cost(c, std::vector<double>(c, 0.0));
    const double top = static_cast<double>(n);
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) cost[i][j] = top - count[i][j];
    std::vector<int> mapping = min_cost_assignment(cost);

    double matched = 0.0;
    for (int i = 0; i < c; ++i) matched += count[i][mapping[i]];
    return {matched / n, mapping};
}

double macro_f1(const Labels& pred, const Labels& truth, const std::vector<int>& mapping) {
    check_pair(pred, truth, "macro_f1");
    const int c = label_range(pred, truth);
    if (static_cast<int>(mapping.size()) < c) throw ParameterError("macro_f1: mapping too short");

    std::vector<double> tp(c, 0.0), fp(c, 0.0), fn(c, 0.0);
    for (size_t i = 0; i < pred.size(); ++i) {
        const int p = mapping[pred[i]], t = truth[i];
        if (p == t) tp[p] += 1.0;
        else { fp[p] += 1.0; fn[t] += 1.0; }
    }
    double sum = 0.0;
    for (int j = 0; j < c; ++j) {
        const double denom = 2.0 * tp[j] + fp[j] + fn[j];
        sum += denom > 0.0 ? 2.0 * tp[j] / denom : 0.0;
    }
    return sum / c;
}

double nmi(const Labels& pred, const Labels& truth) {
    check_pair(pred, truth, "nmi");
    const int c = label_range(pred, truth);
    const int n = static_cast<int>(pred.size());

    std::vector<int> a(c, 0), b(c, 0);
    std::vector<std::vector<int>> joint(c, std::vector<int>(c, 0));
    for (int i = 0; i < n; ++i) {
        ++a[pred[i]];
        ++b[truth[i]];
        ++joint[pred[i]][truth[i]];
    }
    const double ha = entropy_nats(a, n), hb = entropy_nats(b, n);
    if (ha == 0.0 || hb == 0.0) return pred == truth ? 1.0 : 0.0;

    double mi = 0.0;
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j)
            if (joint[i][j] > 0) {
                const double pij = static_cast<double>(joint[i][j]) / n;
                mi += pij * std::log(pij * n / (static_cast<double>(a[i]) * b[j] / n));
            }
    return mi / (0.5 * (ha + hb));
}

double ari(const Labels& pred, const Labels& truth) {
    check_pair(pred, truth, "ari");
    const int n = static_cast<int>(pred.size());
    if (n < 2) throw ParameterError("ari undefined for fewer than 2 points");
    const int c = label_range(pred, truth);

    std::vector<long long> a(c, 0), b(c, 0);
    std::vector<std::vector<long long>> joint(c, std::vector<long long>(c, 0));
    for (int i = 0; i < n; ++i) {
        ++a[pred[i]];
        ++b[truth[i]];
        ++joint[pred[i]][truth[i]];
    }
    double idx = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) idx += comb2(joint[i][j]);
    for (int i = 0; i < c; ++i) { sum_a += comb2(a[i]); sum_b += comb2(b[i]); }

    const double expected = sum_a * sum_b / comb2(n);
    const double max_idx = 0.5 * (sum_a + sum_b);
    if (max_idx == expected)  // both partitions trivial (all-singleton or single cluster)
        return idx == expected ? 1.0 : 0.0;
    return (idx - expected) / (max_idx - expected);
}

ClusterEvaluation evaluate_clustering(const Labels& pred, const Labels& truth) {
    ClusterEvaluation ev;
    auto [acc, mapping] = hungarian_accuracy(pred, truth);
    ev.acc = acc;
    ev.mapping = mapping;
    ev.f1 = macro_f1(pred, truth, mapping);
    ev.nmi = nmi(pred, truth);
    ev.ari = ari(pred, truth);
    return ev;
}

double silhouette_score(const Matrix& Z, const Labels& labels) {
    const Index n = Z.rows();
    if (static_cast<Index>(labels.size()) != n)
        throw ShapeError("silhouette_score: label count mismatch");
    const int c = label_range(labels, labels);
    if (c < 2) return -1.0;

    std::vector<int> size(c, 0);
    for (int l : labels) ++size[l];

    double total = 0.0;
    std::vector<double> mean_dist(c);
    for (Index i = 0; i < n; ++i) {
        std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
        for (Index j = 0; j < n; ++j)
            if (j != i) mean_dist[labels[j]] += (Z.row(i) - Z.row(j)).norm();
        const int li = labels[i];
        double a = size[li] > 1 ? mean_dist[li] / (size[li] - 1) : 0.0;
        double b = std::numeric_limits<double>::infinity();
        for (int l = 0; l < c; ++l)
            if (l != li && size[l] > 0) b = std::min(b, mean_dist[l] / size[l]);
        if (size[li] <= 1 || !std::isfinite(b)) continue;  // contributes 0
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(n);
}

}  // namespace btgf
